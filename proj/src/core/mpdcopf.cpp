#include "mpdcopf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "csv.hpp"
#include "error.hpp"

namespace synthgrid {

namespace {

constexpr auto npos = MpdcopfProblem::npos;

std::string name(const char* prefix, std::int64_t id, std::size_t t) {
    return std::string(prefix) + std::to_string(id) + "_t" + std::to_string(t);
}

// Piecewise segments a generator can move along above its floor.
struct SegmentPlan {
    double start = 0.0;             // output at which the first segment begins
    std::vector<double> lo, hi;     // absolute MW bounds of each segment
    std::vector<double> slope;
};

SegmentPlan plan_segments(const Generator& g) {
    SegmentPlan plan;
    const auto& c = g.cost_curve;
    const bool must_run = is_must_run(g.fuel);
    if (c.degenerate()) {
        plan.start = must_run ? g.p_max : 0.0;
        if (!must_run && g.p_max > 0.0) {
            plan.lo.push_back(0.0);
            plan.hi.push_back(g.p_max);
            plan.slope.push_back(c.marginal_costs.front());
        }
        return plan;
    }
    plan.start = must_run ? c.breakpoints.front() : 0.0;
    for (std::size_t k = 0; k < c.segment_count(); ++k) {
        double lo = c.breakpoints[k];
        double hi = c.breakpoints[k + 1];
        if (k == 0 && !must_run) lo = 0.0;  // decommittable units price [0, p_min] at the first slope
        plan.lo.push_back(lo);
        plan.hi.push_back(hi);
        plan.slope.push_back(c.marginal_costs[k]);
    }
    return plan;
}

void check_matrix(const Matrix& m, std::size_t rows, std::size_t hours, const char* what) {
    if (m.size() != rows) {
        fail(ErrorKind::dimension_mismatch, std::string(what) + ": expected " + std::to_string(rows) +
                                                " rows, found " + std::to_string(m.size()));
    }
    for (const auto& r : m) {
        if (r.size() != hours) {
            fail(ErrorKind::dimension_mismatch, std::string(what) + ": expected " + std::to_string(hours) + " hours");
        }
        for (double v : r) {
            if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::invalid_argument, std::string(what) + " must be finite and ≥ 0");
        }
    }
}

}  // namespace

MpdcopfProblem build_problem(const Network& n, const Matrix& demand, const Matrix& availability_in,
                             const MpdcopfOptions& options, const std::optional<std::vector<double>>& initial) {
    const std::size_t T = demand.empty() ? 0 : demand.front().size();
    if (T == 0) fail(ErrorKind::dimension_mismatch, "horizon must be at least one hour");
    check_matrix(demand, n.buses.size(), T, "demand");

    Matrix availability = availability_in;
    if (availability.empty()) {
        for (const auto& g : n.generators) availability.emplace_back(T, g.p_max);
    }
    check_matrix(availability, n.generators.size(), T, "availability");
    for (std::size_t gi = 0; gi < n.generators.size(); ++gi) {
        const auto& g = n.generators[gi];
        if (!g.cost_curve.well_formed() || !g.cost_curve.convex()) {
            fail(ErrorKind::unbounded_cost, "generator " + std::to_string(g.id) + " has a non-convex cost curve");
        }
        for (double a : availability[gi]) {
            if (a > g.p_max * (1.0 + 1e-9) + 1e-9) {
                fail(ErrorKind::invalid_argument, "availability of generator " + std::to_string(g.id) + " exceeds p_max");
            }
        }
    }
    if (initial && initial->size() != n.generators.size()) {
        fail(ErrorKind::dimension_mismatch, "initial dispatch must have one value per generator");
    }
    if (options.soft_limits && !(options.penalty > 0.0)) fail(ErrorKind::invalid_argument, "penalty must be positive");

    MpdcopfProblem p;
    p.network = &n;
    p.hours = T;
    p.demand = demand;
    p.availability = availability;
    p.initial_dispatch = initial;
    p.options = options;
    auto& lp = p.lp;

    std::unordered_map<BusId, std::size_t> bus_at;
    for (std::size_t b = 0; b < n.buses.size(); ++b) bus_at[n.buses[b].id] = b;

    // Reference bus: lowest id in each AC island.
    {
        std::vector<std::size_t> parent(n.buses.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& br : n.branches) {
            auto a = find(bus_at.at(br.from_bus)), b = find(bus_at.at(br.to_bus));
            if (a != b) parent[a] = b;
        }
        std::unordered_map<std::size_t, std::size_t> lowest;
        for (std::size_t b = 0; b < n.buses.size(); ++b) {
            auto root = find(b);
            auto it = lowest.find(root);
            if (it == lowest.end() || n.buses[b].id < n.buses[it->second].id) lowest[root] = b;
        }
        for (auto& [root, b] : lowest) p.reference_buses.push_back(b);
        std::sort(p.reference_buses.begin(), p.reference_buses.end());
    }
    std::vector<char> is_reference(n.buses.size(), 0);
    for (auto b : p.reference_buses) is_reference[b] = 1;

    auto grid = [&](std::size_t count) { return std::vector<std::vector<std::size_t>>(count, std::vector<std::size_t>(T, npos)); };
    p.balance_row = grid(n.buses.size());
    p.angle_col = grid(n.buses.size());
    p.shed_col = grid(n.buses.size());
    p.flow_col = grid(n.branches.size());
    p.flow_row = grid(n.branches.size());
    p.violation_up_col = grid(n.branches.size());
    p.violation_down_col = grid(n.branches.size());
    p.dc_col = grid(n.dc_lines.size());
    p.segment_begin = grid(n.generators.size());
    p.segment_count.assign(n.generators.size(), 0);
    p.floor.assign(n.generators.size(), std::vector<double>(T, 0.0));

    // Rows first so columns can reference them.
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t b = 0; b < n.buses.size(); ++b) {
            p.balance_row[b][t] = lp.add_row(demand[b][t], name("balance_b", n.buses[b].id, t), "balance");
        }
        for (std::size_t l = 0; l < n.branches.size(); ++l) {
            p.flow_row[l][t] = lp.add_row(0.0, name("flow_l", n.branches[l].id, t), "branch_flow");
        }
    }

    // Generators.
    for (std::size_t gi = 0; gi < n.generators.size(); ++gi) {
        const auto& g = n.generators[gi];
        auto plan = plan_segments(g);
        p.segment_count[gi] = plan.slope.size();
        const std::size_t b = bus_at.at(g.bus);
        for (std::size_t t = 0; t < T; ++t) {
            const double avail = availability[gi][t];
            const double floor = std::min(plan.start, avail);
            p.floor[gi][t] = floor;
            lp.rhs[p.balance_row[b][t]] -= floor;
            p.segment_begin[gi][t] = lp.num_columns();
            for (std::size_t k = 0; k < plan.slope.size(); ++k) {
                double ub = std::clamp(avail - plan.lo[k], 0.0, plan.hi[k] - plan.lo[k]);
                auto col = lp.add_column(plan.slope[k], 0.0, ub,
                                         "p_g" + std::to_string(g.id) + "_k" + std::to_string(k) + "_t" + std::to_string(t));
                lp.add_coefficient(p.balance_row[b][t], col, 1.0);
            }
            if (is_must_run(g.fuel)) lp.objective_offset += g.no_load_cost;
        }
    }

    // Angles and branch flows.
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t b = 0; b < n.buses.size(); ++b) {
            double bound = is_reference[b] ? 0.0 : kInfinity;
            p.angle_col[b][t] = lp.add_column(0.0, -bound, bound, name("theta_b", n.buses[b].id, t));
        }
        for (std::size_t l = 0; l < n.branches.size(); ++l) {
            const auto& br = n.branches[l];
            const auto from = bus_at.at(br.from_bus), to = bus_at.at(br.to_bus);
            const double susceptance = n.base_mva / br.reactance;
            const auto row = p.flow_row[l][t];
            auto s = lp.add_column(0.0, -br.capacity, br.capacity, name("f_l", br.id, t));
            p.flow_col[l][t] = s;
            std::vector<std::pair<std::size_t, double>> flow_parts{{s, 1.0}};
            if (options.soft_limits) {
                auto up = lp.add_column(options.penalty, 0.0, kInfinity, name("vpos_l", br.id, t));
                auto down = lp.add_column(options.penalty, 0.0, kInfinity, name("vneg_l", br.id, t));
                p.violation_up_col[l][t] = up;
                p.violation_down_col[l][t] = down;
                flow_parts.push_back({up, 1.0});
                flow_parts.push_back({down, -1.0});
            }
            for (auto& [col, sign] : flow_parts) {
                lp.add_coefficient(row, col, sign);
                lp.add_coefficient(p.balance_row[from][t], col, -sign);
                lp.add_coefficient(p.balance_row[to][t], col, sign);
            }
            lp.add_coefficient(row, p.angle_col[from][t], -susceptance);
            lp.add_coefficient(row, p.angle_col[to][t], susceptance);
        }
        for (std::size_t d = 0; d < n.dc_lines.size(); ++d) {
            const auto& dc = n.dc_lines[d];
            auto col = lp.add_column(0.0, -dc.capacity, dc.capacity, name("dc_d", dc.id, t));
            p.dc_col[d][t] = col;
            lp.add_coefficient(p.balance_row[bus_at.at(dc.from_bus)][t], col, -1.0);
            lp.add_coefficient(p.balance_row[bus_at.at(dc.to_bus)][t], col, 1.0);
        }
        if (options.allow_load_shed) {
            for (std::size_t b = 0; b < n.buses.size(); ++b) {
                if (demand[b][t] <= 0.0) continue;
                auto col = lp.add_column(options.load_shed_cost, 0.0, demand[b][t], name("shed_b", n.buses[b].id, t));
                p.shed_col[b][t] = col;
                lp.add_coefficient(p.balance_row[b][t], col, 1.0);
            }
        }
    }

    // Ramp rows: output(t) − output(t−1) − r = 0 with r ∈ [−ramp, ramp].
    for (std::size_t gi = 0; gi < n.generators.size(); ++gi) {
        const auto& g = n.generators[gi];
        const std::size_t K = p.segment_count[gi];
        for (std::size_t t = 0; t < T; ++t) {
            bool has_previous = t > 0;
            if (!has_previous && !initial) continue;
            double previous_level = has_previous ? 0.0 : (*initial)[gi];
            double reach = std::max(g.p_max, previous_level);
            if (g.ramp_limit >= reach) continue;  // cannot bind
            double rhs = has_previous ? p.floor[gi][t - 1] - p.floor[gi][t] : previous_level - p.floor[gi][t];
            auto row = lp.add_row(rhs, name("ramp_g", g.id, t), has_previous ? "ramp" : "initial_ramp");
            for (std::size_t k = 0; k < K; ++k) {
                lp.add_coefficient(row, p.segment_begin[gi][t] + k, 1.0);
                if (has_previous) lp.add_coefficient(row, p.segment_begin[gi][t - 1] + k, -1.0);
            }
            auto slack = lp.add_column(0.0, -g.ramp_limit, g.ramp_limit, name("ramp_g", g.id, t));
            lp.add_coefficient(row, slack, -1.0);
        }
    }
    return p;
}

MpdcopfSolution solve(const MpdcopfProblem& p, const SimplexOptions& simplex) {
    const Network& n = *p.network;
    const std::size_t T = p.hours;
    auto lp_solution = solve_lp(p.lp, simplex);

    MpdcopfSolution s;
    s.status = lp_solution.status;
    s.iterations = lp_solution.iterations;
    if (lp_solution.status == LpStatus::iteration_limit || lp_solution.status == LpStatus::unbounded) {
        fail(ErrorKind::numerical_failure,
             std::string("simplex stopped: ") + to_string(lp_solution.status) + " after " +
                 std::to_string(lp_solution.iterations) + " iterations");
    }
    if (lp_solution.status == LpStatus::infeasible) {
        for (std::size_t i = 0; i < lp_solution.infeasible_row_classes.size(); ++i) {
            if (i) s.infeasibility_hint += ",";
            s.infeasibility_hint += lp_solution.infeasible_row_classes[i];
        }
        return s;
    }

    const auto& x = lp_solution.x;
    const auto& y = lp_solution.row_duals;
    const auto& d = lp_solution.reduced_costs;
    auto zeros = [&](std::size_t count) { return Matrix(count, std::vector<double>(T, 0.0)); };
    s.objective = lp_solution.objective;
    s.dispatch = zeros(n.generators.size());
    s.angles = zeros(n.buses.size());
    s.flows = zeros(n.branches.size());
    s.dc_flows = zeros(n.dc_lines.size());
    s.shed = zeros(n.buses.size());
    s.violations = zeros(n.branches.size());
    s.lmp = zeros(n.buses.size());
    s.mu = zeros(n.branches.size());

    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t gi = 0; gi < n.generators.size(); ++gi) {
            double out = p.floor[gi][t];
            for (std::size_t k = 0; k < p.segment_count[gi]; ++k) out += x[p.segment_begin[gi][t] + k];
            s.dispatch[gi][t] = out;
        }
        for (std::size_t b = 0; b < n.buses.size(); ++b) {
            s.angles[b][t] = x[p.angle_col[b][t]];
            s.lmp[b][t] = y[p.balance_row[b][t]];
            if (p.shed_col[b][t] != npos) s.shed[b][t] = x[p.shed_col[b][t]];
        }
        for (std::size_t l = 0; l < n.branches.size(); ++l) {
            const auto col = p.flow_col[l][t];
            double flow = x[col];
            double violation = 0.0;
            if (p.violation_up_col[l][t] != npos) {
                double up = x[p.violation_up_col[l][t]];
                double down = x[p.violation_down_col[l][t]];
                flow += up - down;
                violation = up + down;
            }
            s.flows[l][t] = flow;
            s.violations[l][t] = violation;
            const double cap = n.branches[l].capacity;
            const double tol = 1e-9 * std::max(1.0, cap);
            if (std::abs(std::abs(x[col]) - cap) <= tol) s.mu[l][t] = std::abs(d[col]);
        }
        for (std::size_t dl = 0; dl < n.dc_lines.size(); ++dl) s.dc_flows[dl][t] = x[p.dc_col[dl][t]];
    }
    return s;
}

const Matrix& lmps(const MpdcopfSolution& s) {
    if (!s.optimal()) fail(ErrorKind::not_optimal, "LMPs requested from a non-optimal solution");
    return s.lmp;
}

double average_congestion(const std::vector<MpdcopfSolution>& windows, std::size_t branch) {
    double total = 0.0;
    std::size_t hours = 0;
    for (const auto& w : windows) {
        if (!w.optimal()) continue;
        if (branch >= w.mu.size()) fail(ErrorKind::invalid_argument, "branch index out of range");
        for (double m : w.mu[branch]) total += m;
        hours += w.mu[branch].size();
    }
    return hours ? total / static_cast<double>(hours) : 0.0;
}

void write_solution_csv(const std::filesystem::path& path, const MpdcopfProblem& p, const MpdcopfSolution& s) {
    const Network& n = *p.network;
    CsvWriter w(path, {"entity", "hour", "value", "dual"});
    if (!s.optimal()) return;
    for (std::size_t t = 0; t < p.hours; ++t) {
        auto hour = std::to_string(t);
        for (std::size_t gi = 0; gi < n.generators.size(); ++gi) {
            w.row({"gen:" + std::to_string(n.generators[gi].id), hour, format_number(s.dispatch[gi][t]), ""});
        }
        for (std::size_t b = 0; b < n.buses.size(); ++b) {
            w.row({"bus:" + std::to_string(n.buses[b].id), hour, format_number(s.angles[b][t]),
                   format_number(s.lmp[b][t])});
            if (s.shed[b][t] != 0.0) {
                w.row({"shed:" + std::to_string(n.buses[b].id), hour, format_number(s.shed[b][t]), ""});
            }
        }
        for (std::size_t l = 0; l < n.branches.size(); ++l) {
            w.row({"branch:" + std::to_string(n.branches[l].id), hour, format_number(s.flows[l][t]),
                   format_number(s.mu[l][t])});
        }
        for (std::size_t dl = 0; dl < n.dc_lines.size(); ++dl) {
            w.row({"dcline:" + std::to_string(n.dc_lines[dl].id), hour, format_number(s.dc_flows[dl][t]), ""});
        }
    }
}

}  // namespace synthgrid
