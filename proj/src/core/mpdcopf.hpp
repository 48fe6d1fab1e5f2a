#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "grid_model.hpp"
#include "lp_solver.hpp"

namespace synthgrid {

using Matrix = std::vector<std::vector<double>>;  // [entity][hour]

struct MpdcopfOptions {
    bool soft_limits = false;
    double penalty = 2000.0;          // currency/MWh of branch-limit violation
    bool allow_load_shed = true;
    double load_shed_cost = 10000.0;  // currency/MWh
};

// Multi-period DC OPF as an LP. The problem keeps a pointer to the network,
// which must outlive it.
//
// Variables per hour: generator cost segments, bus angles (reference bus of
// each AC island fixed at 0), branch flows bounded by capacity (plus penalised
// violation pairs in soft mode), DC-line transfers, load shed, and one bounded
// ramp slack per ramp row. Rows: nodal balance, flow definition, ramp.
struct MpdcopfProblem {
    const Network* network = nullptr;
    std::size_t hours = 0;
    Matrix demand;        // [bus index][t], MW
    Matrix availability;  // [generator index][t], MW, ≤ p_max
    std::optional<std::vector<double>> initial_dispatch;  // [generator index]
    MpdcopfOptions options;

    LinearProgram lp;

    // Column/row layout, indexed [entity][t]; npos when absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> segment_count;               // per generator
    std::vector<std::vector<std::size_t>> segment_begin;  // first segment column
    Matrix floor;                                         // must-run output not carried by columns
    std::vector<std::vector<std::size_t>> angle_col, shed_col, balance_row;
    std::vector<std::vector<std::size_t>> flow_col, violation_up_col, violation_down_col, flow_row;
    std::vector<std::vector<std::size_t>> dc_col;
    std::vector<std::size_t> reference_buses;  // bus indices with fixed angle
};

// Throws DimensionMismatch for inconsistent shapes and UnboundedCost for a
// non-convex cost curve.
MpdcopfProblem build_problem(const Network& network, const Matrix& demand, const Matrix& availability,
                             const MpdcopfOptions& options = {},
                             const std::optional<std::vector<double>>& initial_dispatch = std::nullopt);

struct MpdcopfSolution {
    LpStatus status = LpStatus::infeasible;
    std::string infeasibility_hint;  // constraint classes left violated by phase 1
    double objective = 0.0;
    Matrix dispatch;    // [gen][t]
    Matrix angles;      // [bus][t], rad
    Matrix flows;       // [branch][t], MW
    Matrix dc_flows;    // [dcline][t]
    Matrix shed;        // [bus][t]
    Matrix violations;  // [branch][t], |f| beyond capacity (soft mode)
    Matrix lmp;         // [bus][t]
    Matrix mu;          // [branch][t], ≥ 0
    std::size_t iterations = 0;

    bool optimal() const { return status == LpStatus::optimal; }
};

// NumericalFailure when the simplex hits its iteration cap.
MpdcopfSolution solve(const MpdcopfProblem& problem, const SimplexOptions& simplex = {});

const Matrix& lmps(const MpdcopfSolution& solution);

// Time-average of μ for one branch over every hour of every window.
double average_congestion(const std::vector<MpdcopfSolution>& windows, std::size_t branch_index);

// entity,hour,value,dual
void write_solution_csv(const std::filesystem::path& path, const MpdcopfProblem& problem,
                        const MpdcopfSolution& solution);

}  // namespace synthgrid
