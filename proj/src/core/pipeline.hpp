#pragma once

#include <functional>
#include <string>

#include "run_config.hpp"

namespace synthgrid {

enum class LogLevel { info = 0, warning = 1 };

using LogSink = std::function<void(LogLevel, const std::string&)>;

// Stages communicate only through files under config.out:
//   build    → case/ (+ calibration_factors.csv)
//   profiles → profiles/profile_{demand,wind,solar,hydro}.csv
//   simulate → simulate/log_*.csv, energy_by_state_fuel.csv
//   upgrade  → upgrade/case/, upgrade/upgrades.csv, upgrade/log_*.csv
//   report   → report/comparison*.csv, comparison.svg, case_revised/
void cmd_build(const RunConfig& config, const LogSink& log);
void cmd_profiles(const RunConfig& config, const LogSink& log);
void cmd_simulate(const RunConfig& config, const LogSink& log);
void cmd_upgrade(const RunConfig& config, const LogSink& log);
void cmd_report(const RunConfig& config, const LogSink& log);

// Dispatches by name and prefixes errors with the stage.
void run_stage(const std::string& stage, const RunConfig& config, const LogSink& log);

}  // namespace synthgrid
