#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace synthgrid {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string format_number(std::int64_t value) { return std::to_string(value); }

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

// Splits one logical record starting at `pos`; advances pos and the line counter.
bool next_record(const std::string& data, std::size_t& pos, std::size_t& line,
                 std::vector<std::string>& fields, const std::filesystem::path& path) {
    fields.clear();
    if (pos >= data.size()) return false;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    const std::size_t start_line = line;
    while (pos < data.size()) {
        char c = data[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < data.size() && data[pos + 1] == '"') {
                    field += '"';
                    pos += 2;
                    continue;
                }
                quoted = false;
                ++pos;
                continue;
            }
            if (c == '\n') ++line;
            field += c;
            ++pos;
            continue;
        }
        if (c == '"') {
            if (!field.empty()) {
                fail(ErrorKind::parse, path.filename().string() + ":" + std::to_string(start_line) +
                                           ": stray quote inside unquoted field");
            }
            quoted = true;
            was_quoted = true;
            ++pos;
            continue;
        }
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
            ++pos;
            continue;
        }
        if (c == '\r' || c == '\n') {
            if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') ++pos;
            ++pos;
            ++line;
            fields.push_back(std::move(field));
            return true;
        }
        field += c;
        ++pos;
    }
    if (quoted) {
        fail(ErrorKind::parse, path.filename().string() + ":" + std::to_string(start_line) +
                                   ": unterminated quoted field");
    }
    (void)was_quoted;
    fields.push_back(std::move(field));
    ++line;
    return true;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path,
                        const std::vector<std::string_view>& required,
                        const std::vector<std::string_view>& optional) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string data = buffer.str();
    if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);

    CsvTable table;
    table.path_ = path;
    const std::string name = path.filename().string();
    std::size_t pos = 0;
    std::size_t line = 1;
    std::vector<std::string> fields;
    if (!next_record(data, pos, line, fields, path) ||
        (fields.size() == 1 && trim(fields[0]).empty())) {
        fail(ErrorKind::parse, name + ":1: missing header row");
    }
    for (auto& f : fields) table.header_.push_back(trim(f));

    for (std::size_t i = 0; i < table.header_.size(); ++i) {
        const auto& col = table.header_[i];
        bool known = std::find(required.begin(), required.end(), col) != required.end() ||
                     std::find(optional.begin(), optional.end(), col) != optional.end();
        if (!known) fail(ErrorKind::parse, name + ":1: unknown column '" + col + "'");
        if (std::count(table.header_.begin(), table.header_.end(), col) > 1) {
            fail(ErrorKind::parse, name + ":1: duplicate column '" + col + "'");
        }
    }
    for (auto col : required) {
        if (!table.has_column(col)) {
            fail(ErrorKind::parse, name + ":1: missing column '" + std::string(col) + "'");
        }
    }

    while (true) {
        std::size_t row_line = line;
        if (!next_record(data, pos, line, fields, path)) break;
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
        if (fields.size() != table.header_.size()) {
            fail(ErrorKind::parse, name + ":" + std::to_string(row_line) + ": expected " +
                                       std::to_string(table.header_.size()) + " fields, found " +
                                       std::to_string(fields.size()));
        }
        Row row;
        row.line_ = row_line;
        row.fields_ = std::move(fields);
        fields = {};
        table.rows_.push_back(std::move(row));
    }
    for (auto& row : table.rows_) row.table_ = &table;
    return table;
}

bool CsvTable::has_column(std::string_view column) const {
    return std::find(header_.begin(), header_.end(), column) != header_.end();
}

std::size_t CsvTable::column_index(std::string_view column) const {
    auto it = std::find(header_.begin(), header_.end(), column);
    if (it == header_.end()) {
        fail(ErrorKind::parse, path_.filename().string() + ": no column '" + std::string(column) + "'");
    }
    return static_cast<std::size_t>(it - header_.begin());
}

void CsvTable::Row::reject(std::string_view column, const std::string& reason) const {
    fail(ErrorKind::parse, table_->path_.filename().string() + ":" + std::to_string(line_) +
                               ": column '" + std::string(column) + "': " + reason);
}

const std::string& CsvTable::Row::text(std::string_view column) const {
    static const std::string none;
    if (!table_->has_column(column)) return none;
    return fields_[table_->column_index(column)];
}

bool CsvTable::Row::empty(std::string_view column) const { return trim(text(column)).empty(); }

double CsvTable::Row::number(std::string_view column) const {
    auto v = optional_number(column);
    if (!v) reject(column, "missing value");
    return *v;
}

std::optional<double> CsvTable::Row::optional_number(std::string_view column) const {
    std::string s = trim(text(column));
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto first = s.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        reject(column, "not a finite number '" + s + "'");
    }
    return v;
}

std::int64_t CsvTable::Row::integer(std::string_view column) const {
    std::string s = trim(text(column));
    if (s.empty()) reject(column, "missing value");
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) reject(column, "not an integer '" + s + "'");
    return v;
}

bool CsvTable::Row::flag(std::string_view column) const {
    std::string s = trim(text(column));
    if (s == "1" || s == "true" || s == "TRUE" || s == "True") return true;
    if (s == "0" || s == "false" || s == "FALSE" || s == "False") return false;
    reject(column, "not a flag '" + s + "' (expected 0/1/true/false)");
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), width_(header.size()) {
    if (!out_) fail(ErrorKind::io, "cannot write " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) {
        fail(ErrorKind::invalid_argument, path_.filename().string() + ": row width mismatch");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
    if (!out_) fail(ErrorKind::io, "write failed for " + path_.string());
}

}  // namespace synthgrid
