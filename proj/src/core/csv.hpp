#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synthgrid {

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
std::string format_number(std::int64_t value);

// Strict CSV table: header row mandatory, every row must have exactly the
// header's field count, columns outside required+optional are rejected.
// Double quotes follow RFC 4180 (needed for the embedded curve JSON).
class CsvTable {
public:
    static CsvTable read(const std::filesystem::path& path,
                         const std::vector<std::string_view>& required,
                         const std::vector<std::string_view>& optional = {});

    std::size_t size() const { return rows_.size(); }
    bool has_column(std::string_view column) const;
    const std::filesystem::path& path() const { return path_; }

    class Row {
    public:
        std::size_t line() const { return line_; }
        const std::string& text(std::string_view column) const;
        bool empty(std::string_view column) const;
        double number(std::string_view column) const;
        std::optional<double> optional_number(std::string_view column) const;
        std::int64_t integer(std::string_view column) const;
        bool flag(std::string_view column) const;
        [[noreturn]] void reject(std::string_view column, const std::string& reason) const;

    private:
        friend class CsvTable;
        const CsvTable* table_ = nullptr;
        std::size_t line_ = 0;
        std::vector<std::string> fields_;
    };

    const Row& operator[](std::size_t i) const { return rows_[i]; }
    auto begin() const { return rows_.begin(); }
    auto end() const { return rows_.end(); }

private:
    std::size_t column_index(std::string_view column) const;

    std::filesystem::path path_;
    std::vector<std::string> header_;
    std::vector<Row> rows_;
};

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t width_;
};

std::string csv_escape(std::string_view field);

}  // namespace synthgrid
