#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "grid_model.hpp"
#include "harness.hpp"

namespace synthgrid {

using GenerationKey = std::pair<std::string, Fuel>;  // (state, fuel)

struct GenerationTable {
    std::map<GenerationKey, double> twh;
};

// Σ_t dispatch · 1 h per generator (state, fuel), in TWh.
GenerationTable aggregate_generation(const SimulationLog& log, const Network& network);

// historical.csv: state,fuel,twh
GenerationTable load_historical(const std::filesystem::path& path);

struct ComparisonRow {
    std::string state;
    Fuel fuel = Fuel::other;
    double simulated = 0.0;
    double historical = 0.0;
    double error = 0.0;  // simulated − historical
};

struct ComparisonResult {
    std::vector<ComparisonRow> rows;  // ordered by (state, fuel)
    double euclidean = 0.0;
    double sum_abs = 0.0;
    std::vector<std::string> warnings;  // keys present on one side only
};

ComparisonResult compare(const GenerationTable& simulated, const GenerationTable& historical);

struct CostMultiplier {
    std::string state;
    Fuel fuel = Fuel::other;
    double multiplier = 1.0;
};

// Scales every marginal cost of each (state, fuel) group by
// clamp(1 + beta·(sim − hist)/hist, 1 − cap, 1 + cap). A group with no
// historical energy but positive simulated energy takes 1 + cap.
Network revise_costs(const Network& network, const ComparisonResult& comparison, double cap = 0.05,
                     double beta = 1.0, std::vector<CostMultiplier>* multipliers = nullptr);

// comparison.csv, comparison_metrics.csv, comparison.svg
void emit_report(const ComparisonResult& comparison, const std::filesystem::path& directory);

std::string comparison_svg(const ComparisonResult& comparison);

}  // namespace synthgrid
