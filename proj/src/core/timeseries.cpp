#include "timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <unordered_map>

#include "error.hpp"

namespace synthgrid {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Uniform in [0, 1) from the top 53 bits; identical on every standard library.
double canonical(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::map<BusId, HourlyProfile> disaggregate_demand(const HourlyProfile& zone,
                                                   const std::vector<std::pair<BusId, double>>& weights) {
    double total = 0.0;
    for (auto& [bus, w] : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            fail(ErrorKind::invalid_argument, "bus " + std::to_string(bus) + " has a negative population weight");
        }
        total += w;
    }
    if (!(total > 0.0)) fail(ErrorKind::zero_total_weight, "population weights sum to zero");

    std::map<BusId, HourlyProfile> out;
    for (auto& [bus, w] : weights) {
        HourlyProfile p{zone.start, {}, zone.unit};
        p.values.reserve(zone.size());
        double share = w / total;
        for (double z : zone.values) p.values.push_back(z * share);
        out[bus] = std::move(p);
    }
    return out;
}

WeekendCalendar utc_weekend_calendar() {
    return [](std::int64_t day) { return is_weekend(UtcHour{day * 24}); };
}

HourlyProfile impute_missing_demand(const HourlyProfile& profile, const WeekendCalendar& calendar) {
    HourlyProfile out = profile;
    if (profile.values.empty()) return out;
    const std::int64_t first_day = day_index(profile.start);
    const std::int64_t last_day = day_index(profile.time_at(profile.size() - 1));

    // Original value at (day, hour) or NaN when absent or missing.
    auto original = [&](std::int64_t day, unsigned hour) {
        std::int64_t offset = day * 24 + hour - profile.start.hours_since_epoch;
        if (offset < 0 || offset >= static_cast<std::int64_t>(profile.size())) return HourlyProfile::missing();
        return profile.values[static_cast<std::size_t>(offset)];
    };
    auto describe = [&](std::size_t i) { return format_utc_hour(profile.time_at(i)); };

    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!profile.is_missing(i)) continue;
        const auto t = profile.time_at(i);
        const auto day = day_index(t);
        const auto hour = hour_of_day(t);
        std::vector<double> donors;

        if (!calendar(day)) {
            for (auto d = day - 1; d >= first_day; --d) {
                if (calendar(d)) continue;
                double v = original(d, hour);
                if (!std::isnan(v)) {
                    donors.push_back(v);
                    break;
                }
            }
            for (auto d = day + 1; d <= last_day; ++d) {
                if (calendar(d)) continue;
                double v = original(d, hour);
                if (!std::isnan(v)) {
                    donors.push_back(v);
                    break;
                }
            }
        } else {
            // Other day of the same weekend, if it has this hour.
            for (auto d : {day - 1, day + 1}) {
                if (!calendar(d)) continue;
                double v = original(d, hour);
                if (!std::isnan(v)) {
                    donors.push_back(v);
                    break;
                }
            }
            if (donors.empty()) {
                auto partner = calendar(day + 1) ? day + 1 : day - 1;
                auto from_weekend = [&](std::int64_t step) {
                    for (std::int64_t k = 1;; ++k) {
                        auto d = day + step * 7 * k;
                        if (d < first_day - 1 || d > last_day + 1) return;
                        for (auto candidate : {d, partner + step * 7 * k}) {
                            if (!calendar(candidate)) continue;
                            double v = original(candidate, hour);
                            if (!std::isnan(v)) {
                                donors.push_back(v);
                                return;
                            }
                        }
                    }
                };
                from_weekend(-1);
                from_weekend(+1);
            }
        }
        if (donors.empty()) fail(ErrorKind::no_donor_data, "no donor data for missing demand at " + describe(i));
        out.values[i] = std::accumulate(donors.begin(), donors.end(), 0.0) / static_cast<double>(donors.size());
    }
    return out;
}

std::vector<std::size_t> detect_anomalies(const HourlyProfile& profile, double k) {
    const auto& p = profile.values;
    if (p.size() < 3) fail(ErrorKind::too_short, "anomaly detection needs at least 3 hours");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) {
            fail(ErrorKind::invalid_argument, "profile has a missing value at " + format_utc_hour(profile.time_at(i)));
        }
    }
    const std::size_t n = p.size() - 1;
    std::vector<double> ramps(n);
    for (std::size_t t = 1; t < p.size(); ++t) ramps[t - 1] = std::abs(p[t] - p[t - 1]);
    double mean = std::accumulate(ramps.begin(), ramps.end(), 0.0) / static_cast<double>(n);
    double sq = 0.0;
    for (double r : ramps) sq += (r - mean) * (r - mean);
    double stddev = std::sqrt(sq / static_cast<double>(n));
    double threshold = mean + k * stddev;

    std::vector<std::size_t> flagged;
    for (std::size_t t = 1; t < p.size(); ++t) {
        if (!(ramps[t - 1] > threshold)) continue;
        if (!flagged.empty() && flagged.back() == t - 1) continue;
        flagged.push_back(t);
    }
    return flagged;
}

HourlyProfile interpolate_anomalies(const HourlyProfile& profile, const std::vector<std::size_t>& flagged) {
    HourlyProfile out = profile;
    const std::size_t n = profile.size();
    std::vector<char> bad(n, 0);
    for (auto i : flagged) {
        if (i >= n) fail(ErrorKind::invalid_argument, "flagged index " + std::to_string(i) + " out of range");
        bad[i] = 1;
    }
    std::size_t i = 0;
    while (i < n) {
        if (!bad[i]) {
            ++i;
            continue;
        }
        std::size_t run_end = i;
        while (run_end < n && bad[run_end]) ++run_end;
        bool has_left = i > 0;
        bool has_right = run_end < n;
        if (!has_left && !has_right) fail(ErrorKind::no_valid_neighbor, "every hour is flagged");
        if (has_left && has_right) {
            double left = profile.values[i - 1];
            double right = profile.values[run_end];
            double span = static_cast<double>(run_end - (i - 1));
            for (std::size_t j = i; j < run_end; ++j) {
                double frac = static_cast<double>(j - (i - 1)) / span;
                out.values[j] = left + (right - left) * frac;
            }
        } else {
            double edge = has_left ? profile.values[i - 1] : profile.values[run_end];
            for (std::size_t j = i; j < run_end; ++j) out.values[j] = edge;
        }
        i = run_end;
    }
    return out;
}

std::vector<WindSample> impute_wind_uv(const std::vector<WindSample>& samples, std::uint64_t seed) {
    using Key = std::tuple<std::string, unsigned, unsigned>;
    struct Range {
        double u_min = std::numeric_limits<double>::infinity();
        double u_max = -std::numeric_limits<double>::infinity();
        double v_min = std::numeric_limits<double>::infinity();
        double v_max = -std::numeric_limits<double>::infinity();
        bool any = false;
    };
    std::map<Key, Range> ranges;
    for (const auto& s : samples) {
        if (s.missing) continue;
        if (!std::isfinite(s.u) || !std::isfinite(s.v)) {
            fail(ErrorKind::invalid_argument, "non-finite wind sample at " + s.location);
        }
        auto& r = ranges[{s.location, month_of(s.time), hour_of_day(s.time)}];
        r.u_min = std::min(r.u_min, s.u);
        r.u_max = std::max(r.u_max, s.u);
        r.v_min = std::min(r.v_min, s.v);
        r.v_max = std::max(r.v_max, s.v);
        r.any = true;
    }

    // Missing samples of one key are drawn in time order from that key's stream.
    std::map<Key, std::vector<std::size_t>> holes;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].missing) holes[{samples[i].location, month_of(samples[i].time), hour_of_day(samples[i].time)}].push_back(i);
    }

    std::vector<WindSample> out = samples;
    for (auto& [key, indices] : holes) {
        auto& [location, month, hour] = key;
        auto it = ranges.find(key);
        if (it == ranges.end() || !it->second.any) {
            fail(ErrorKind::no_donor_data, "no wind donors for location " + location + ", month " +
                                               std::to_string(month) + ", hour " + std::to_string(hour));
        }
        const auto& r = it->second;
        std::stable_sort(indices.begin(), indices.end(),
                         [&](std::size_t a, std::size_t b) { return samples[a].time < samples[b].time; });
        std::uint64_t stream = splitmix64(seed ^ splitmix64(fnv1a(location) ^ splitmix64(month * 24ULL + hour)));
        std::mt19937_64 rng(stream);
        for (auto i : indices) {
            double a = canonical(rng);
            double b = canonical(rng);
            out[i].u = std::clamp(r.u_min + (r.u_max - r.u_min) * a, r.u_min, r.u_max);
            out[i].v = std::clamp(r.v_min + (r.v_max - r.v_min) * b, r.v_min, r.v_max);
            out[i].missing = false;
        }
    }
    return out;
}

PowerCurve PowerCurve::iec_class2() {
    PowerCurve c;
    c.speeds = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    c.fractions = {0.0, 0.0436, 0.1317, 0.2556, 0.4180, 0.6076, 0.7863, 0.9104, 0.9707, 0.9927, 0.9976, 1.0};
    c.cut_in = 3.0;
    c.cut_out = 25.0;
    return c;
}

void PowerCurve::validate() const {
    if (speeds.empty() || speeds.size() != fractions.size()) {
        fail(ErrorKind::invalid_argument, "power curve needs matching, non-empty speed and fraction tables");
    }
    for (std::size_t k = 0; k < speeds.size(); ++k) {
        if (k > 0 && !(speeds[k] > speeds[k - 1])) fail(ErrorKind::invalid_argument, "power curve speeds must increase");
        if (!(fractions[k] >= 0.0 && fractions[k] <= 1.0)) {
            fail(ErrorKind::invalid_argument, "power curve fractions must lie in [0, 1]");
        }
    }
    if (!(cut_in >= 0.0 && cut_in < cut_out)) fail(ErrorKind::invalid_argument, "power curve needs cut_in < cut_out");
}

double PowerCurve::fraction_at(double speed) const {
    if (speed < cut_in || speed >= cut_out) return 0.0;
    if (speed <= speeds.front()) return speed == speeds.front() ? fractions.front() : 0.0;
    if (speed >= speeds.back()) return fractions.back();
    auto it = std::upper_bound(speeds.begin(), speeds.end(), speed);
    auto k = static_cast<std::size_t>(it - speeds.begin());
    double t = (speed - speeds[k - 1]) / (speeds[k] - speeds[k - 1]);
    return fractions[k - 1] + t * (fractions[k] - fractions[k - 1]);
}

double wind_power(double u, double v, const PowerCurve& curve, double p_max) {
    return p_max * curve.fraction_at(std::hypot(u, v));
}

void TrackingMix::validate() const {
    if (!(fixed >= 0.0 && single_axis >= 0.0 && dual_axis >= 0.0)) {
        fail(ErrorKind::bad_mix, "tracking mix weights must be nonnegative");
    }
    if (std::abs(fixed + single_axis + dual_axis - 1.0) > 1e-9) {
        fail(ErrorKind::bad_mix, "tracking mix weights must sum to 1");
    }
}

HourlyProfile solar_power(const HourlyProfile& irradiance, const TrackingMix& mix, double p_max,
                          const ArrayGains& gains) {
    mix.validate();
    HourlyProfile out{irradiance.start, {}, "MW"};
    out.values.reserve(irradiance.size());
    const double gain = mix.fixed * gains.fixed + mix.single_axis * gains.single_axis + mix.dual_axis * gains.dual_axis;
    for (std::size_t i = 0; i < irradiance.size(); ++i) {
        double w = irradiance.values[i];
        if (!std::isfinite(w) || w < 0.0) {
            fail(ErrorKind::invalid_argument, "irradiance must be finite and nonnegative at " +
                                                  format_utc_hour(irradiance.time_at(i)));
        }
        double x = std::clamp(w / 1000.0, 0.0, 1.1);
        out.values.push_back(std::clamp(p_max * gain * x, 0.0, p_max));
    }
    return out;
}

HydroResult hydro_profile(const HourlyProfile& shape, const std::map<unsigned, double>& monthly_energy,
                          double p_max, bool flat) {
    HydroResult result;
    result.profile = HourlyProfile{shape.start, std::vector<double>(shape.size(), 0.0), "MW"};

    // Consecutive runs of hours sharing a calendar month.
    std::size_t i = 0;
    while (i < shape.size()) {
        const unsigned month = month_of(shape.time_at(i));
        std::size_t end = i;
        while (end < shape.size() && month_of(shape.time_at(end)) == month) ++end;
        auto it = monthly_energy.find(month);
        if (it == monthly_energy.end()) {
            fail(ErrorKind::invalid_argument, "no monthly hydro energy for month " + std::to_string(month));
        }
        const double energy = it->second;
        const double hours = static_cast<double>(end - i);
        double shape_sum = 0.0;
        for (std::size_t t = i; t < end; ++t) {
            if (!std::isfinite(shape.values[t]) || shape.values[t] < 0.0) {
                fail(ErrorKind::invalid_argument, "hydro shape must be finite and nonnegative");
            }
            shape_sum += shape.values[t];
        }
        const double flat_value = energy / hours;
        bool use_flat = flat;
        if (!use_flat) {
            if (shape_sum <= 0.0) {
                if (energy != 0.0) {
                    fail(ErrorKind::invalid_argument,
                         "hydro shape sums to zero in month " + std::to_string(month) + " with positive energy");
                }
            } else {
                const double tol = 1e-9 * std::max(1.0, p_max);
                for (std::size_t t = i; t < end; ++t) {
                    double value = shape.values[t] * energy / shape_sum;
                    result.profile.values[t] = value;
                    if (value > p_max + tol) use_flat = true;
                }
                if (use_flat) result.fallback_months.push_back(month);
            }
        }
        if (use_flat) {
            if (flat_value > p_max * (1.0 + 1e-12)) {
                fail(ErrorKind::infeasible_month, "month " + std::to_string(month) + " needs " +
                                                      std::to_string(flat_value) + " MW flat, above p_max " +
                                                      std::to_string(p_max));
            }
            for (std::size_t t = i; t < end; ++t) result.profile.values[t] = flat_value;
        }
        i = end;
    }
    return result;
}

}  // namespace synthgrid
