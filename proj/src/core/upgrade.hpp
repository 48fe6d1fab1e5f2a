#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "error.hpp"
#include "harness.hpp"

namespace synthgrid {

enum class UpgradeTarget { eliminate_shed, lmp_floor };

const char* to_string(UpgradeTarget target);
UpgradeTarget parse_upgrade_target(std::string_view text);

struct UpgradePolicy {
    double shadow_price_threshold = 25.0;  // currency/MWh
    double step_size = 100.0;              // MW
    std::size_t max_iterations = 50;
    UpgradeTarget target = UpgradeTarget::lmp_floor;
    double lmp_floor = 5.0;  // renewable-bus average LMP, currency/MWh

    void validate() const;
};

// One record per modified branch; `iterations` counts the steps applied to it.
struct UpgradeRecord {
    EntityId branch = 0;
    double old_capacity = 0.0;
    double new_capacity = 0.0;
    std::size_t iterations = 0;
    std::string trigger;         // "avg_mu" or "violation_mw"
    double trigger_value = 0.0;  // metric when the branch was first selected
};

struct CongestedBranch {
    EntityId branch = 0;
    double average_mu = 0.0;
};

// Branches whose time-average μ over the optimal windows exceeds the threshold,
// highest first, ties by lower id. EmptyLog when no window solved.
std::vector<CongestedBranch> find_congested(const SimulationLog& log, const UpgradePolicy& policy);

// Whether the log meets the policy target: no shed or demand reduction, and
// either every renewable bus averages at least lmp_floor (lmp_floor target) or
// no branch averages μ above the threshold (eliminate_shed target).
bool upgrade_target_met(const SimulationLog& log, const Network& network, const UpgradePolicy& policy);

struct UpgradeResult {
    Network network;
    std::vector<UpgradeRecord> records;
    SimulationLog final_log;
    std::vector<double> objective_trajectory;  // total objective per simulation
};

// Raised by step_upgrade at the iteration cap; carries the work done so far.
class UpgradeIterationCap : public Error {
public:
    UpgradeIterationCap(const std::string& message, UpgradeResult partial)
        : Error(ErrorKind::iteration_cap_exceeded, message), partial_(std::move(partial)) {}
    const UpgradeResult& partial() const { return partial_; }

private:
    UpgradeResult partial_;
};

// Simulate, step the worst congested branch by step_size, repeat until the
// target holds.
UpgradeResult step_upgrade(const Network& network, const Scenario& scenario, const WindowPlan& plan,
                           const HarnessOptions& options, const UpgradePolicy& policy);

struct SoftRequirement {
    EntityId branch = 0;
    double extra_mw = 0.0;  // max hourly violation
};

// Runs the scenario with soft branch limits and reports, per branch, the
// largest violation seen in any hour.
std::vector<SoftRequirement> size_upgrades_soft(const Network& network, const Scenario& scenario,
                                                const WindowPlan& plan, const HarnessOptions& options,
                                                double penalty);

// Adds each requirement to its branch capacity and records the change.
Network apply_soft_requirements(const Network& network, const std::vector<SoftRequirement>& requirements,
                                std::vector<UpgradeRecord>* records = nullptr);

// branch,old_mw,new_mw,trigger,trigger_value,iterations
void write_upgrades_csv(const std::filesystem::path& path, const std::vector<UpgradeRecord>& records);

}  // namespace synthgrid
