#include <cmath>
#include <ostream>

#include "csv.hpp"
#include "lp_solver.hpp"

namespace synthgrid {

namespace {

std::string sanitize(const std::string& name, char prefix, std::size_t index) {
    if (name.empty()) return std::string(1, prefix) + std::to_string(index);
    std::string out;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                  c == '.' || c == '(' || c == ')' || c == '[' || c == ']';
        out += ok ? c : '_';
    }
    if (out.front() >= '0' && out.front() <= '9') out.insert(out.begin(), prefix);
    return out;
}

void term(std::ostream& out, double coefficient, const std::string& name, bool first) {
    if (coefficient < 0) {
        out << (first ? "-" : " - ");
    } else if (!first) {
        out << " + ";
    }
    double a = std::abs(coefficient);
    if (a != 1.0) out << format_number(a) << ' ';
    out << name;
}

}  // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& out) {
    const std::size_t n = lp.num_columns();
    const std::size_t m = lp.num_rows();
    std::vector<std::string> col(n), row(m);
    for (std::size_t j = 0; j < n; ++j) col[j] = sanitize(lp.column_names[j], 'x', j);
    for (std::size_t i = 0; i < m; ++i) row[i] = sanitize(lp.row_names[i], 'r', i);

    std::vector<std::vector<std::pair<std::size_t, double>>> rows(m);
    for (std::size_t j = 0; j < n; ++j) {
        for (const auto& e : lp.columns[j]) rows[e.row].emplace_back(j, e.value);
    }

    out << "\\ objective offset " << format_number(lp.objective_offset) << '\n';
    out << "Minimize\n obj: ";
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.cost[j] == 0.0) continue;
        term(out, lp.cost[j], col[j], first);
        first = false;
    }
    if (first) out << "0 " << (n ? col[0] : std::string("x0"));
    out << "\nSubject To\n";
    for (std::size_t i = 0; i < m; ++i) {
        out << ' ' << row[i] << ": ";
        bool first_term = true;
        for (auto& [j, a] : rows[i]) {
            term(out, a, col[j], first_term);
            first_term = false;
        }
        if (first_term) out << "0 " << (n ? col[0] : std::string("x0"));
        out << " = " << format_number(lp.rhs[i]) << '\n';
    }
    out << "Bounds\n";
    for (std::size_t j = 0; j < n; ++j) {
        double lo = lp.lower[j], hi = lp.upper[j];
        if (lo == hi) {
            out << ' ' << col[j] << " = " << format_number(lo) << '\n';
        } else if (!std::isfinite(lo) && !std::isfinite(hi)) {
            out << ' ' << col[j] << " free\n";
        } else {
            out << ' ' << (std::isfinite(lo) ? format_number(lo) : std::string("-inf")) << " <= " << col[j]
                << " <= " << (std::isfinite(hi) ? format_number(hi) : std::string("+inf")) << '\n';
        }
    }
    out << "End\n";
}

}  // namespace synthgrid
