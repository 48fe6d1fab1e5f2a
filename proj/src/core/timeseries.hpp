#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "grid_model.hpp"
#include "hourly_profile.hpp"

namespace synthgrid {

// ---- demand -----------------------------------------------------------------

// bus_t = zone_t * w_b / Σw. Missing zone hours stay missing on every bus.
std::map<BusId, HourlyProfile> disaggregate_demand(const HourlyProfile& zone_profile,
                                                   const std::vector<std::pair<BusId, double>>& weights);

// Calendar labels keyed by day index (days since the Unix epoch).
using WeekendCalendar = std::function<bool(std::int64_t day)>;
WeekendCalendar utc_weekend_calendar();

// Fills missing hours. Weekday holes take the mean of the same hour on the
// nearest preceding and following weekdays with data; weekend holes copy the
// other day of the same weekend, or average the same hour on the neighbouring
// weekends when both days are missing. Donors are always original values.
HourlyProfile impute_missing_demand(const HourlyProfile& profile,
                                    const WeekendCalendar& calendar = utc_weekend_calendar());

// Flags hour t when |p_t - p_{t-1}| > mean(|Δ|) + k·std(|Δ|), statistics over
// every ramp of the series. A ramp whose earlier hour is already flagged does
// not flag again, so an isolated spike yields a single index.
std::vector<std::size_t> detect_anomalies(const HourlyProfile& profile, double sigma_multiplier = 5.0);

HourlyProfile interpolate_anomalies(const HourlyProfile& profile, const std::vector<std::size_t>& flagged);

// ---- wind -------------------------------------------------------------------

struct WindSample {
    std::string location;
    UtcHour time;
    double u = 0.0;  // m/s at 80 m
    double v = 0.0;
    bool missing = false;
};

// Draws each missing U and V uniformly inside the extrema of the non-missing
// samples sharing (location, month, hour-of-day). One random stream per key.
std::vector<WindSample> impute_wind_uv(const std::vector<WindSample>& samples, std::uint64_t seed);

struct PowerCurve {
    std::vector<double> speeds;     // m/s, strictly increasing
    std::vector<double> fractions;  // of rated power, in [0, 1]
    double cut_in = 3.0;
    double cut_out = 25.0;

    // Default IEC Class 2 style table: cut-in 3 m/s, rated from 14 m/s, cut-out 25 m/s.
    static PowerCurve iec_class2();
    void validate() const;
    double fraction_at(double speed) const;
};

double wind_power(double u, double v, const PowerCurve& curve, double p_max);

// ---- solar ------------------------------------------------------------------

struct TrackingMix {
    double fixed = 1.0;
    double single_axis = 0.0;
    double dual_axis = 0.0;

    void validate() const;
};

// Linear plane-of-array model: output fraction = gain * clamp(irradiance / 1000, 0, 1.1).
struct ArrayGains {
    double fixed = 0.85;
    double single_axis = 0.95;
    double dual_axis = 1.00;
};

HourlyProfile solar_power(const HourlyProfile& irradiance, const TrackingMix& mix, double p_max,
                          const ArrayGains& gains = {});

// ---- hydro ------------------------------------------------------------------

struct HydroResult {
    HourlyProfile profile;
    std::vector<unsigned> fallback_months;  // months that switched to the flat profile
};

// Shapes each month's energy by `shape`; a month whose shaped output exceeds
// p_max, or any month when `flat` is set, gets E_m / hours(m) instead.
// monthly_energy is keyed by month number 1..12 and applies to the hours of
// that month covered by the shape.
HydroResult hydro_profile(const HourlyProfile& shape, const std::map<unsigned, double>& monthly_energy,
                          double p_max, bool flat = false);

}  // namespace synthgrid
