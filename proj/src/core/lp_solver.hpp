#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace synthgrid {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// min cᵀx + offset   s.t.   A x = b,   lower ≤ x ≤ upper.
// Inequalities are expressed by the caller through bounded slack columns.
class LinearProgram {
public:
    struct Entry {
        std::size_t row;
        double value;
    };

    std::size_t add_column(double cost, double lower, double upper, std::string name = {});
    std::size_t add_row(double rhs, std::string name = {}, std::string row_class = {});
    // Adds value to A(row, col); repeated calls accumulate.
    void add_coefficient(std::size_t row, std::size_t col, double value);

    std::size_t num_rows() const { return rhs.size(); }
    std::size_t num_columns() const { return cost.size(); }

    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::vector<Entry>> columns;
    std::vector<std::string> column_names;
    std::vector<double> rhs;
    std::vector<std::string> row_names;
    std::vector<std::string> row_classes;
    double objective_offset = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;             // includes the offset
    std::vector<double> x;
    std::vector<double> row_duals;      // ∂objective/∂rhs
    std::vector<double> reduced_costs;  // c_j − yᵀA_j
    std::vector<std::string> infeasible_row_classes;  // classes still violated after phase 1
    std::size_t iterations = 0;
};

struct SimplexOptions {
    std::size_t max_iterations = 0;  // 0 selects 50·(rows + columns) + 1000
    double feasibility_tolerance = 1e-9;
    double optimality_tolerance = 1e-10;  // scaled by max |cost|
    double pivot_tolerance = 1e-10;
    std::size_t refactor_interval = 100;
    std::size_t degenerate_steps_before_bland = 50;
};

// Two-phase bounded-variable revised simplex with an explicit basis inverse,
// Dantzig pricing and a Bland's-rule fallback on degenerate stalls.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

// CPLEX LP text format, for cross-checking with external solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& out);

}  // namespace synthgrid
