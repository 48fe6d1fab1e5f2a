#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "grid_model.hpp"
#include "hourly_profile.hpp"
#include "mpdcopf.hpp"

namespace synthgrid {

struct Window {
    std::size_t begin = 0;  // hour offset from the horizon start
    std::size_t hours = 0;
};

struct WindowPlan {
    std::size_t total_hours = 0;
    std::size_t window_hours = 0;
    std::vector<Window> windows;

    std::size_t count() const { return windows.size(); }
    // Hours actually covered by the windows (less than total_hours when truncated).
    std::size_t covered_hours() const;
};

// Contiguous windows of W hours covering [0, total_hours); the last may be short.
WindowPlan plan_windows(std::size_t total_hours, std::size_t window_hours);
// Keeps only the first `count` windows; 0 keeps all.
WindowPlan first_windows(const WindowPlan& plan, std::size_t count);

// Hourly inputs aligned to one horizon.
struct Scenario {
    UtcHour start;
    std::size_t hours = 0;
    Matrix demand;        // [bus index][hour]
    Matrix availability;  // [generator index][hour]
};

// Demand profiles are keyed by bus id and required for every demand-participating
// bus; availability profiles are keyed by generator id and required for every
// wind, solar and hydro unit. Other generators are available at p_max.
Scenario build_scenario(const Network& network, const std::map<EntityId, HourlyProfile>& demand,
                        const std::map<EntityId, HourlyProfile>& availability, UtcHour start, std::size_t hours);

struct HarnessOptions {
    MpdcopfOptions mpdcopf{.soft_limits = false, .penalty = 2000.0, .allow_load_shed = false,
                           .load_shed_cost = 10000.0};
    std::size_t retry_cap = 20;
    double retry_factor = 0.95;
    SimplexOptions simplex;
};

struct WindowRecord {
    std::size_t index = 0;
    Window window;
    LpStatus status = LpStatus::infeasible;
    std::size_t retries = 0;
    double demand_scale = 1.0;
    double objective = 0.0;
    std::size_t iterations = 0;
    std::vector<std::string> retry_causes;  // phase-1 hint of each failed attempt
};

// Hourly results concatenated over all windows, indexed [entity][hour].
struct SimulationLog {
    UtcHour start;
    std::size_t hours = 0;
    std::vector<BusId> bus_ids;
    std::vector<EntityId> branch_ids, generator_ids;
    std::vector<WindowRecord> windows;
    Matrix dispatch, lmp, mu, flow, violation, shed, served_demand;

    std::size_t total_retries() const;
    double total_shed() const;
};

// Solves the windows in order. Window k > 0 is ramp-coupled to the final-hour
// dispatch of window k-1. An infeasible window is re-solved with all demand
// scaled by retry_factor^r until it solves or the retry cap is exceeded.
SimulationLog run_rolling_horizon(const Network& network, const Scenario& scenario, const WindowPlan& plan,
                                  const HarnessOptions& options = {});

// log_windows.csv, log_hours.csv, energy_by_state_fuel.csv
void write_simulation_log(const SimulationLog& log, const Network& network, const std::filesystem::path& directory);
// Rebuilds the hourly matrices from log_hours.csv and the window table from log_windows.csv.
SimulationLog read_simulation_log(const std::filesystem::path& directory);

}  // namespace synthgrid
