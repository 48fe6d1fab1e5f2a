#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "grid_model.hpp"
#include "hourly_profile.hpp"

namespace synthgrid {

// Per-group target. When `interconnection` is set the group is
// (state, interconnection, fuel), otherwise (state, fuel). Either target may
// be absent, in which case that calibration leaves the group alone.
struct CalibrationTarget {
    std::string state;
    Fuel fuel = Fuel::other;
    std::optional<std::string> interconnection;
    std::optional<double> target_capacity;   // MW
    std::optional<double> target_avg_price;  // currency/MWh
};

struct GroupFactor {
    std::string state;
    Fuel fuel = Fuel::other;
    std::string interconnection;  // empty when the target is not qualified
    double factor = 1.0;
    bool replaced = false;  // zero-cost curves replaced by a flat price
};

std::vector<CalibrationTarget> load_targets(const std::filesystem::path& path);

// Generator indices belonging to the target's group, in network order.
std::vector<std::size_t> group_members(const Network& n, const CalibrationTarget& target);
double group_capacity(const Network& n, const std::vector<std::size_t>& members);
// Σ(p_max · mean marginal cost) / Σ p_max.
double group_average_price(const Network& n, const std::vector<std::size_t>& members);

// Multiplies p_max, p_min, ramp, no-load cost and curve breakpoints of each
// targeted group by target/current capacity.
Network scale_generators_to_targets(const Network& n, const std::vector<CalibrationTarget>& targets,
                                    std::vector<GroupFactor>* factors = nullptr);

// Scales marginal costs so the group's capacity-weighted average matches the
// target; an all-zero-cost group is given a flat curve at the target instead.
Network calibrate_fuel_costs(const Network& n, const std::vector<CalibrationTarget>& targets,
                             std::vector<GroupFactor>* factors = nullptr);

EmissionsCurve derive_emissions_curve(const Generator& gen, const HeatRateCurve& heat_rate, double co2_rate);

struct GeothermalRating {
    double p_max = 0.0;
    double p_min = 0.0;
};

GeothermalRating set_geothermal_ratings(const HourlyProfile& annual_generation);

// Spur capacity := max(capacity, Σ p_max behind the spur).
Network match_spur_capacity(const Network& n);

}  // namespace synthgrid
