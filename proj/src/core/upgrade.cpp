#include "upgrade.hpp"

#include <algorithm>
#include <cmath>

#include "csv.hpp"

namespace synthgrid {

const char* to_string(UpgradeTarget target) {
    return target == UpgradeTarget::eliminate_shed ? "eliminate_shed" : "lmp_floor";
}

UpgradeTarget parse_upgrade_target(std::string_view text) {
    if (text == "eliminate_shed") return UpgradeTarget::eliminate_shed;
    if (text == "lmp_floor") return UpgradeTarget::lmp_floor;
    fail(ErrorKind::invalid_argument, "unknown upgrade target '" + std::string(text) + "'");
}

void UpgradePolicy::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) fail(ErrorKind::invalid_argument, "step_size must be > 0");
    if (!(shadow_price_threshold >= 0.0)) fail(ErrorKind::invalid_argument, "shadow_price_threshold must be ≥ 0");
    if (!std::isfinite(lmp_floor)) fail(ErrorKind::invalid_argument, "lmp_floor must be finite");
}

namespace {

// Mean over the hours of optimal windows.
std::vector<double> window_average(const SimulationLog& log, const Matrix& m) {
    std::vector<double> out(m.size(), 0.0);
    std::size_t hours = 0;
    for (const auto& w : log.windows) {
        if (w.status != LpStatus::optimal) continue;
        hours += w.window.hours;
        for (std::size_t r = 0; r < m.size(); ++r) {
            for (std::size_t h = w.window.begin; h < w.window.begin + w.window.hours; ++h) out[r] += m[r][h];
        }
    }
    if (hours == 0) fail(ErrorKind::empty_log, "simulation log has no solved window");
    for (double& v : out) v /= static_cast<double>(hours);
    return out;
}

double total_objective(const SimulationLog& log) {
    double total = 0.0;
    for (const auto& w : log.windows) total += w.objective;
    return total;
}

}  // namespace

std::vector<CongestedBranch> find_congested(const SimulationLog& log, const UpgradePolicy& policy) {
    const auto average = window_average(log, log.mu);
    std::vector<CongestedBranch> out;
    for (std::size_t l = 0; l < average.size(); ++l) {
        if (average[l] > policy.shadow_price_threshold) out.push_back({log.branch_ids[l], average[l]});
    }
    std::sort(out.begin(), out.end(), [](const CongestedBranch& a, const CongestedBranch& b) {
        if (a.average_mu != b.average_mu) return a.average_mu > b.average_mu;
        return a.branch < b.branch;
    });
    return out;
}

bool upgrade_target_met(const SimulationLog& log, const Network& n, const UpgradePolicy& policy) {
    if (log.total_retries() > 0 || log.total_shed() > 1e-6) return false;
    if (policy.target == UpgradeTarget::eliminate_shed) return find_congested(log, policy).empty();
    const auto average = window_average(log, log.lmp);
    for (const auto& g : n.generators) {
        if (!is_renewable(g.fuel)) continue;
        auto b = std::find(log.bus_ids.begin(), log.bus_ids.end(), g.bus);
        if (b == log.bus_ids.end()) continue;
        if (average[static_cast<std::size_t>(b - log.bus_ids.begin())] < policy.lmp_floor) return false;
    }
    return true;
}

UpgradeResult step_upgrade(const Network& network, const Scenario& scenario, const WindowPlan& plan,
                           const HarnessOptions& options, const UpgradePolicy& policy) {
    policy.validate();
    UpgradeResult result;
    result.network = network;
    for (std::size_t iteration = 0;; ++iteration) {
        result.final_log = run_rolling_horizon(result.network, scenario, plan, options);
        result.objective_trajectory.push_back(total_objective(result.final_log));
        if (upgrade_target_met(result.final_log, result.network, policy)) return result;

        auto congested = find_congested(result.final_log, policy);
        if (congested.empty()) {
            // Target unmet but nothing over the threshold: step the most congested branch left.
            const auto average = window_average(result.final_log, result.final_log.mu);
            auto best = std::max_element(average.begin(), average.end());
            if (best == average.end() || *best <= 0.0) {
                fail(ErrorKind::upgrade_stalled, "upgrade target not met and no branch is congested");
            }
            congested.push_back({result.final_log.branch_ids[static_cast<std::size_t>(best - average.begin())], *best});
        }
        if (iteration >= policy.max_iterations) {
            throw UpgradeIterationCap("upgrade target not met after " + std::to_string(iteration) + " iterations",
                                      std::move(result));
        }
        const auto top = congested.front();
        auto& branch = result.network.branches[*result.network.branch_index(top.branch)];
        auto record = std::find_if(result.records.begin(), result.records.end(),
                                   [&](const UpgradeRecord& r) { return r.branch == top.branch; });
        if (record == result.records.end()) {
            result.records.push_back({top.branch, branch.capacity, branch.capacity, 0, "avg_mu", top.average_mu});
            record = result.records.end() - 1;
        }
        branch.capacity += policy.step_size;
        record->new_capacity = branch.capacity;
        ++record->iterations;
    }
}

std::vector<SoftRequirement> size_upgrades_soft(const Network& network, const Scenario& scenario,
                                                const WindowPlan& plan, const HarnessOptions& options,
                                                double penalty) {
    HarnessOptions soft = options;
    soft.mpdcopf.soft_limits = true;
    soft.mpdcopf.penalty = penalty;
    auto log = run_rolling_horizon(network, scenario, plan, soft);
    std::vector<SoftRequirement> out;
    for (std::size_t l = 0; l < log.branch_ids.size(); ++l) {
        double worst = 0.0;
        for (double v : log.violation[l]) worst = std::max(worst, v);
        if (worst > 1e-9) out.push_back({log.branch_ids[l], worst});
    }
    return out;
}

Network apply_soft_requirements(const Network& network, const std::vector<SoftRequirement>& requirements,
                                std::vector<UpgradeRecord>* records) {
    Network out = network;
    for (const auto& r : requirements) {
        auto index = out.branch_index(r.branch);
        if (!index) fail(ErrorKind::invalid_argument, "unknown branch " + std::to_string(r.branch));
        auto& branch = out.branches[*index];
        const double old = branch.capacity;
        branch.capacity += r.extra_mw;
        if (records) records->push_back({r.branch, old, branch.capacity, 1, "violation_mw", r.extra_mw});
    }
    return out;
}

void write_upgrades_csv(const std::filesystem::path& path, const std::vector<UpgradeRecord>& records) {
    CsvWriter w(path, {"branch", "old_mw", "new_mw", "trigger", "trigger_value", "iterations"});
    for (const auto& r : records) {
        w.row({std::to_string(r.branch), format_number(r.old_capacity), format_number(r.new_capacity), r.trigger,
               format_number(r.trigger_value), std::to_string(r.iterations)});
    }
}

}  // namespace synthgrid
