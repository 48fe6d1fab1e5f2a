#include "pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "calibration.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "profile_io.hpp"
#include "report.hpp"
#include "timeseries.hpp"
#include "upgrade.hpp"

namespace synthgrid {

namespace fs = std::filesystem;

namespace {

void info(const LogSink& log, const std::string& msg) {
    if (log) log(LogLevel::info, msg);
}
void warn(const LogSink& log, const std::string& msg) {
    if (log) log(LogLevel::warning, msg);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
}

std::string group_label(const GroupFactor& f) {
    std::string s = f.state + "/" + std::string(to_string(f.fuel));
    if (!f.interconnection.empty()) s += "/" + f.interconnection;
    return s;
}

// Fits p_max/p_min to the rating and keeps the unit's average price on a single segment.
void apply_geothermal_rating(Generator& g, const GeothermalRating& r, double ramp_fraction) {
    const double price = g.cost_curve.mean_marginal_cost();
    const double f = g.p_max > 0.0 ? r.p_max / g.p_max : 0.0;
    g.p_max = r.p_max;
    g.p_min = r.p_min;
    g.ramp_limit = ramp_fraction * r.p_max;
    if (r.p_max > r.p_min) {
        g.cost_curve = {{r.p_min, r.p_max}, {price}};
    } else {
        g.cost_curve = {{r.p_max}, {price}};
    }
    if (!g.heat_rate.empty()) {
        if (f > 0.0) {
            for (auto& x : g.heat_rate.mw) x *= f;
            for (auto& y : g.heat_rate.mmbtu_per_h) y *= f;
        } else {
            g.heat_rate = HeatRateCurve{{0.0}, {0.0}};
        }
    }
}

HourlyProfile window_of(const HourlyProfile& p, UtcHour start, std::size_t hours) {
    HourlyProfile out{start, std::vector<double>(hours, HourlyProfile::missing()), p.unit};
    for (std::size_t h = 0; h < hours; ++h) {
        auto i = (start + static_cast<std::int64_t>(h)) - p.start;
        if (i >= 0 && i < static_cast<std::int64_t>(p.size())) out.values[h] = p.values[static_cast<std::size_t>(i)];
    }
    return out;
}

std::map<std::string, TrackingMix> default_tracking_mix() {
    return {{"Eastern", {0.67, 0.33, 0.0}}, {"Western", {0.24, 0.76, 0.0}}, {"Texas", {0.08, 0.92, 0.0}}};
}

struct Inputs {
    Network network;
    Scenario scenario;
    WindowPlan plan;
};

Inputs load_inputs(const RunConfig& c, const fs::path& case_dir) {
    if (!fs::exists(case_dir / "bus.csv")) {
        fail(ErrorKind::io, "no calibrated case at " + case_dir.string() + "; run the build stage first");
    }
    Inputs in;
    in.network = load_network(case_dir);
    const auto demand_path = c.profiles_out() / "profile_demand.csv";
    if (!fs::exists(demand_path)) {
        fail(ErrorKind::missing_profile, demand_path.string() + " not found; run the profiles stage first");
    }
    auto demand = read_profiles_csv(demand_path);
    std::map<EntityId, HourlyProfile> availability;
    for (const char* kind : {"wind", "solar", "hydro"}) {
        auto path = c.profiles_out() / ("profile_" + std::string(kind) + ".csv");
        if (!fs::exists(path)) continue;
        for (auto& [id, p] : read_profiles_csv(path)) availability[id] = std::move(p);
    }
    in.scenario = build_scenario(in.network, demand, availability, c.start, c.hours);
    in.plan = first_windows(plan_windows(c.hours, c.window_hours), c.windows);
    return in;
}

void log_simulation(const SimulationLog& s, const LogSink& log) {
    double objective = 0.0;
    for (const auto& w : s.windows) objective += w.objective;
    info(log, "windows: " + std::to_string(s.windows.size()) + ", hours: " + std::to_string(s.hours) +
                  ", retries: " + std::to_string(s.total_retries()) + ", objective: " + format_number(objective));
    for (const auto& w : s.windows) {
        if (w.retries) {
            info(log, "window " + std::to_string(w.index) + ": " + std::to_string(w.retries) +
                          " retries, demand_scale " + format_number(w.demand_scale));
        }
    }
}

}  // namespace

void cmd_build(const RunConfig& c, const LogSink& log) {
    c.validate_for("build");
    Network n = load_network(c.case_dir);
    std::vector<GroupFactor> capacity_factors, price_factors;
    if (c.targets) {
        auto targets = load_targets(*c.targets);
        n = scale_generators_to_targets(n, targets, &capacity_factors);
        n = calibrate_fuel_costs(n, targets, &price_factors);
    }
    if (c.geothermal) {
        auto series = read_series_csv(*c.geothermal, "plant_id", "mw", false);
        for (const auto& [key, profile] : series) {
            auto id = parse_entity_id(key, *c.geothermal);
            auto gi = n.generator_index(id);
            if (!gi) fail(ErrorKind::integrity, "geothermal series for unknown generator " + key);
            auto& g = n.generators[*gi];
            if (g.fuel != Fuel::geothermal) fail(ErrorKind::integrity, "generator " + key + " is not geothermal");
            auto rating = set_geothermal_ratings(profile);
            apply_geothermal_rating(g, rating, c.geothermal_ramp_fraction);
            info(log, "geothermal " + key + ": p_max " + format_number(rating.p_max) + ", p_min " +
                          format_number(rating.p_min));
        }
    }
    n = match_spur_capacity(n);
    auto violations = validate_network(n);
    if (!violations.empty()) {
        const auto& v = violations.front();
        fail(ErrorKind::integrity, "calibrated case invalid: " + v.entity + " " + v.id + ": " + v.rule);
    }
    ensure_dir(c.case_out());
    write_network(n, c.case_out());
    CsvWriter w(c.case_out() / "calibration_factors.csv",
                {"step", "state", "fuel", "interconnection", "factor", "replaced"});
    for (const auto& [step, factors] : {std::pair{"capacity", &capacity_factors}, std::pair{"price", &price_factors}}) {
        for (const auto& f : *factors) {
            w.row({step, f.state, std::string(to_string(f.fuel)), f.interconnection, format_number(f.factor),
                   f.replaced ? "1" : "0"});
            info(log, std::string(step) + " scale " + group_label(f) + ": " + format_number(f.factor) +
                          (f.replaced ? " (flat curve at target)" : ""));
        }
    }
    info(log, "case written to " + c.case_out().string());
}

void cmd_profiles(const RunConfig& c, const LogSink& log) {
    c.validate_for("profiles");
    const auto case_dir = c.case_out();
    if (!fs::exists(case_dir / "bus.csv")) {
        fail(ErrorKind::io, "no calibrated case at " + case_dir.string() + "; run the build stage first");
    }
    const Network n = load_network(case_dir);
    ensure_dir(c.profiles_out());
    std::size_t imputed = 0, flagged = 0;

    // Demand: impute, clean spikes, split to buses by population weight.
    std::map<EntityId, HourlyProfile> demand;
    for (const auto& [key, raw] : read_series_csv(*c.demand_zone, "zone_id", "mw", true)) {
        const auto zone = parse_entity_id(key, *c.demand_zone);
        std::vector<std::pair<BusId, double>> weights;
        for (const auto& b : n.buses) {
            if (b.zone_id == zone && b.demand_participation) weights.emplace_back(b.id, b.population_weight);
        }
        if (weights.empty()) {
            warn(log, "zone " + key + " has no demand-participating buses; series ignored");
            continue;
        }
        imputed += raw.missing_count();
        auto filled = raw.missing_count() ? impute_missing_demand(raw) : raw;
        HourlyProfile clean = filled;
        if (filled.size() >= 3) {
            auto spikes = detect_anomalies(filled, c.sigma);
            flagged += spikes.size();
            if (!spikes.empty()) clean = interpolate_anomalies(filled, spikes);
        }
        for (auto& [bus, p] : disaggregate_demand(clean, weights)) demand[bus] = std::move(p);
    }
    write_profiles_csv(c.profiles_out() / "profile_demand.csv", demand);

    // Wind: fill U/V gaps, then convert through the power curve. Locations are generator ids.
    bool has_wind = std::any_of(n.generators.begin(), n.generators.end(), [](auto& g) { return g.fuel == Fuel::wind; });
    if (c.wind_uv) {
        auto samples = read_wind_csv(*c.wind_uv);
        for (const auto& s : samples) imputed += s.missing ? 1 : 0;
        samples = impute_wind_uv(samples, c.seed);
        const PowerCurve curve = c.power_curve ? read_power_curve_csv(*c.power_curve) : PowerCurve::iec_class2();
        curve.validate();
        std::map<std::string, std::map<UtcHour, const WindSample*>> by_location;
        for (const auto& s : samples) by_location[s.location][s.time] = &s;
        std::map<EntityId, HourlyProfile> wind;
        for (const auto& g : n.generators) {
            if (g.fuel != Fuel::wind) continue;
            auto it = by_location.find(std::to_string(g.id));
            if (it == by_location.end()) {
                warn(log, "no wind series for generator " + std::to_string(g.id));
                continue;
            }
            const auto& points = it->second;
            HourlyProfile p{points.begin()->first, {}, "MW"};
            p.values.assign(static_cast<std::size_t>(points.rbegin()->first - p.start) + 1, HourlyProfile::missing());
            for (const auto& [t, s] : points) {
                p.values[static_cast<std::size_t>(t - p.start)] = wind_power(s->u, s->v, curve, g.p_max);
            }
            wind[g.id] = std::move(p);
        }
        write_profiles_csv(c.profiles_out() / "profile_wind.csv", wind);
    } else if (has_wind) {
        warn(log, "inputs.wind_uv not set; wind generators have no profile");
    }

    // Solar: per-interconnection tracking mix.
    bool has_solar = std::any_of(n.generators.begin(), n.generators.end(), [](auto& g) { return g.fuel == Fuel::solar; });
    if (c.irradiance) {
        auto mixes = c.tracking_mix ? read_tracking_mix_csv(*c.tracking_mix) : default_tracking_mix();
        auto series = read_series_csv(*c.irradiance, "plant_id", "w_per_m2", false);
        std::map<EntityId, HourlyProfile> solar;
        for (const auto& g : n.generators) {
            if (g.fuel != Fuel::solar) continue;
            auto it = series.find(std::to_string(g.id));
            if (it == series.end()) {
                warn(log, "no irradiance series for generator " + std::to_string(g.id));
                continue;
            }
            const auto& bus = n.buses[*n.bus_index(g.bus)];
            const auto ic = n.interconnection_of(bus);
            auto mix = mixes.find(ic);
            if (mix == mixes.end()) {
                fail(ErrorKind::bad_mix, "no tracking mix for interconnection '" + ic + "' (generator " +
                                             std::to_string(g.id) + ")");
            }
            solar[g.id] = solar_power(it->second, mix->second, g.p_max, c.gains);
        }
        write_profiles_csv(c.profiles_out() / "profile_solar.csv", solar);
    } else if (has_solar) {
        warn(log, "inputs.irradiance not set; solar generators have no profile");
    }

    // Hydro: monthly energy shaped by the plant's shape ("*" = generic), flat without one.
    bool has_hydro = std::any_of(n.generators.begin(), n.generators.end(), [](auto& g) { return g.fuel == Fuel::hydro; });
    if (c.hydro_energy) {
        auto energy = read_hydro_energy_csv(*c.hydro_energy);
        std::map<std::string, HourlyProfile> shapes;
        if (c.hydro_shape) shapes = read_series_csv(*c.hydro_shape, "plant_id", "value", false);
        std::map<EntityId, HourlyProfile> hydro;
        for (const auto& g : n.generators) {
            if (g.fuel != Fuel::hydro) continue;
            auto e = energy.find(g.id);
            if (e == energy.end()) {
                warn(log, "no monthly energy for hydro generator " + std::to_string(g.id));
                continue;
            }
            auto shape = shapes.find(std::to_string(g.id));
            if (shape == shapes.end()) shape = shapes.find("*");
            HydroResult r;
            if (shape == shapes.end()) {
                HourlyProfile ones{c.start, std::vector<double>(c.hours, 1.0), "1"};
                r = hydro_profile(ones, e->second, g.p_max, true);
            } else {
                auto s = window_of(shape->second, c.start, c.hours);
                if (s.missing_count()) {
                    fail(ErrorKind::missing_profile, "hydro shape '" + shape->first + "' does not cover the horizon");
                }
                r = hydro_profile(s, e->second, g.p_max, false);
            }
            for (auto m : r.fallback_months) {
                info(log, "hydro " + std::to_string(g.id) + ": month " + std::to_string(m) + " uses the flat profile");
            }
            hydro[g.id] = std::move(r.profile);
        }
        write_profiles_csv(c.profiles_out() / "profile_hydro.csv", hydro);
    } else if (has_hydro) {
        warn(log, "inputs.hydro_energy not set; hydro generators have no profile");
    }

    info(log, "imputed: " + std::to_string(imputed));
    info(log, "flagged: " + std::to_string(flagged));
}

void cmd_simulate(const RunConfig& c, const LogSink& log) {
    c.validate_for("simulate");
    auto in = load_inputs(c, c.case_out());
    auto result = run_rolling_horizon(in.network, in.scenario, in.plan, c.harness);
    write_simulation_log(result, in.network, c.simulate_out());
    log_simulation(result, log);
}

void cmd_upgrade(const RunConfig& c, const LogSink& log) {
    c.validate_for("upgrade");
    auto in = load_inputs(c, c.case_out());
    ensure_dir(c.upgrade_out());
    std::vector<UpgradeRecord> records;
    Network upgraded;
    SimulationLog final_log;
    if (c.upgrade_method == "soft") {
        auto needs = size_upgrades_soft(in.network, in.scenario, in.plan, c.harness, c.harness.mpdcopf.penalty);
        upgraded = apply_soft_requirements(in.network, needs, &records);
        final_log = run_rolling_horizon(upgraded, in.scenario, in.plan, c.harness);
    } else {
        try {
            auto result = step_upgrade(in.network, in.scenario, in.plan, c.harness, c.policy);
            upgraded = std::move(result.network);
            records = std::move(result.records);
            final_log = std::move(result.final_log);
        } catch (const UpgradeIterationCap& e) {
            write_upgrades_csv(c.upgrade_out() / "upgrades.csv", e.partial().records);
            throw;
        }
    }
    ensure_dir(c.upgrade_out() / "case");
    write_network(upgraded, c.upgrade_out() / "case");
    write_upgrades_csv(c.upgrade_out() / "upgrades.csv", records);
    write_simulation_log(final_log, upgraded, c.upgrade_out());
    for (const auto& r : records) {
        info(log, "branch " + std::to_string(r.branch) + ": " + format_number(r.old_capacity) + " → " +
                      format_number(r.new_capacity) + " MW (" + r.trigger + " " + format_number(r.trigger_value) + ")");
    }
    info(log, "upgraded branches: " + std::to_string(records.size()));
    log_simulation(final_log, log);
}

void cmd_report(const RunConfig& c, const LogSink& log) {
    c.validate_for("report");
    const bool upgraded = fs::exists(c.upgrade_out() / "log_hours.csv");
    const auto log_dir = upgraded ? c.upgrade_out() : c.simulate_out();
    const auto case_dir = upgraded ? c.upgrade_out() / "case" : c.case_out();
    if (!fs::exists(log_dir / "log_hours.csv")) {
        fail(ErrorKind::io, "no simulation log under " + c.out.string() + "; run the simulate stage first");
    }
    Network network = load_network(case_dir);
    SimulationLog sim = read_simulation_log(log_dir);
    const auto historical = load_historical(*c.historical);
    info(log, "comparing " + log_dir.string());

    ComparisonResult cmp;
    std::vector<CostMultiplier> multipliers;
    const std::size_t passes = std::max<std::size_t>(c.report_iterations, 1);
    for (std::size_t pass = 0; pass < passes; ++pass) {
        if (pass > 0) {
            auto in = load_inputs(c, case_dir);
            sim = run_rolling_horizon(network, in.scenario, in.plan, c.harness);
        }
        cmp = compare(aggregate_generation(sim, network), historical);
        multipliers.clear();
        network = revise_costs(network, cmp, c.cost_cap, c.cost_beta, &multipliers);
        info(log, "pass " + std::to_string(pass + 1) + ": euclidean " + format_number(cmp.euclidean) +
                      " TWh, sum_abs " + format_number(cmp.sum_abs) + " TWh");
    }
    for (const auto& w : cmp.warnings) warn(log, w);
    emit_report(cmp, c.report_out());
    ensure_dir(c.report_out() / "case_revised");
    write_network(network, c.report_out() / "case_revised");
    CsvWriter w(c.report_out() / "cost_multipliers.csv", {"state", "fuel", "multiplier"});
    for (const auto& m : multipliers) w.row({m.state, std::string(to_string(m.fuel)), format_number(m.multiplier)});
}

void run_stage(const std::string& stage, const RunConfig& c, const LogSink& log) {
    try {
        if (stage == "build") {
            cmd_build(c, log);
        } else if (stage == "profiles") {
            cmd_profiles(c, log);
        } else if (stage == "simulate") {
            cmd_simulate(c, log);
        } else if (stage == "upgrade") {
            cmd_upgrade(c, log);
        } else if (stage == "report") {
            cmd_report(c, log);
        } else {
            fail(ErrorKind::invalid_argument, "unknown stage '" + stage + "'");
        }
    } catch (const UpgradeIterationCap& e) {
        throw Error(e.kind(), stage + ": " + e.what());
    } catch (const Error& e) {
        throw Error(e.kind(), stage + ": " + e.what());
    } catch (const fs::filesystem_error& e) {
        throw Error(ErrorKind::io, stage + ": " + e.what());
    }
}

}  // namespace synthgrid
