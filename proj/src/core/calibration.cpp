#include "calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "error.hpp"

namespace synthgrid {

namespace {

std::string group_label(const CalibrationTarget& t) {
    std::string label = t.state + "/" + std::string(to_string(t.fuel));
    if (t.interconnection) label = t.state + "/" + *t.interconnection + "/" + std::string(to_string(t.fuel));
    return label;
}

void scale_generator(Generator& g, double f) {
    g.p_max *= f;
    g.p_min *= f;
    g.ramp_limit *= f;
    g.no_load_cost *= f;
    if (f == 0.0) {
        // Everything collapses onto zero; keep the price so later averages stay defined.
        g.cost_curve = CostCurve{{0.0}, {g.cost_curve.mean_marginal_cost()}};
        if (!g.heat_rate.empty()) g.heat_rate = HeatRateCurve{{0.0}, {0.0}};
        return;
    }
    for (auto& b : g.cost_curve.breakpoints) b *= f;
    for (auto& x : g.heat_rate.mw) x *= f;
    for (auto& y : g.heat_rate.mmbtu_per_h) y *= f;
}

}  // namespace

std::vector<CalibrationTarget> load_targets(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) fail(ErrorKind::io, "missing targets file " + path.string());
    auto table = CsvTable::read(path, {"state", "fuel", "target_capacity_mw", "target_avg_price"},
                                {"interconnection"});
    std::vector<CalibrationTarget> out;
    std::set<std::tuple<std::string, std::string, Fuel>> keys;
    for (auto& row : table) {
        CalibrationTarget t;
        t.state = row.text("state");
        try {
            t.fuel = parse_fuel(row.text("fuel"));
        } catch (const Error& e) {
            row.reject("fuel", e.what());
        }
        if (!row.empty("interconnection")) t.interconnection = row.text("interconnection");
        t.target_capacity = row.optional_number("target_capacity_mw");
        t.target_avg_price = row.optional_number("target_avg_price");
        if (t.target_capacity && *t.target_capacity < 0) row.reject("target_capacity_mw", "negative target");
        if (t.target_avg_price && *t.target_avg_price < 0) row.reject("target_avg_price", "negative target");
        if (!keys.emplace(t.state, t.interconnection.value_or(""), t.fuel).second) {
            row.reject("state", "duplicate target " + group_label(t));
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::size_t> group_members(const Network& n, const CalibrationTarget& t) {
    std::unordered_map<BusId, std::string> bus_ic;
    if (t.interconnection) {
        for (auto& b : n.buses) bus_ic[b.id] = n.interconnection_of(b);
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n.generators.size(); ++i) {
        const auto& g = n.generators[i];
        if (g.state != t.state || g.fuel != t.fuel) continue;
        if (t.interconnection && bus_ic[g.bus] != *t.interconnection) continue;
        members.push_back(i);
    }
    return members;
}

double group_capacity(const Network& n, const std::vector<std::size_t>& members) {
    double total = 0.0;
    for (auto i : members) total += n.generators[i].p_max;
    return total;
}

double group_average_price(const Network& n, const std::vector<std::size_t>& members) {
    double weighted = 0.0;
    double capacity = 0.0;
    for (auto i : members) {
        const auto& g = n.generators[i];
        weighted += g.p_max * g.cost_curve.mean_marginal_cost();
        capacity += g.p_max;
    }
    return capacity > 0.0 ? weighted / capacity : 0.0;
}

Network scale_generators_to_targets(const Network& n, const std::vector<CalibrationTarget>& targets,
                                    std::vector<GroupFactor>* factors) {
    Network out = n;
    for (const auto& t : targets) {
        if (!t.target_capacity) continue;
        auto members = group_members(out, t);
        double target = *t.target_capacity;
        if (members.empty()) {
            if (target > 0.0) {
                fail(ErrorKind::no_generators_for_target, "no generators for target " + group_label(t));
            }
            continue;
        }
        double current = group_capacity(out, members);
        if (current == 0.0) {
            if (target > 0.0) fail(ErrorKind::zero_group_capacity, "zero current capacity in " + group_label(t));
            continue;
        }
        double f = target / current;
        if (std::abs(f - 1.0) > 1e-12) {
            for (auto i : members) scale_generator(out.generators[i], f);
        } else {
            f = 1.0;
        }
        if (factors) factors->push_back({t.state, t.fuel, t.interconnection.value_or(""), f, false});
    }
    return out;
}

Network calibrate_fuel_costs(const Network& n, const std::vector<CalibrationTarget>& targets,
                             std::vector<GroupFactor>* factors) {
    Network out = n;
    for (const auto& t : targets) {
        if (!t.target_avg_price) continue;
        auto members = group_members(out, t);
        double target = *t.target_avg_price;
        if (members.empty()) {
            if (t.target_capacity.value_or(0.0) > 0.0) {
                fail(ErrorKind::no_generators_for_target, "no generators for target " + group_label(t));
            }
            continue;
        }
        if (group_capacity(out, members) <= 0.0) {
            fail(ErrorKind::zero_group_capacity, "zero capacity in " + group_label(t));
        }
        double current = group_average_price(out, members);
        GroupFactor gf{t.state, t.fuel, t.interconnection.value_or(""), 1.0, false};
        if (current == 0.0) {
            bool all_zero = std::all_of(members.begin(), members.end(), [&](std::size_t i) {
                const auto& mc = out.generators[i].cost_curve.marginal_costs;
                return std::all_of(mc.begin(), mc.end(), [](double c) { return c == 0.0; });
            });
            if (!all_zero) {
                fail(ErrorKind::zero_current_price, "current average price is zero in " + group_label(t));
            }
            for (auto i : members) {
                auto& mc = out.generators[i].cost_curve.marginal_costs;
                std::fill(mc.begin(), mc.end(), target);
            }
            gf.replaced = true;
        } else {
            double g = target / current;
            if (std::abs(g - 1.0) > 1e-12) {
                for (auto i : members) {
                    for (auto& c : out.generators[i].cost_curve.marginal_costs) c *= g;
                }
            } else {
                g = 1.0;
            }
            gf.factor = g;
        }
        if (factors) factors->push_back(gf);
    }
    return out;
}

EmissionsCurve derive_emissions_curve(const Generator& gen, const HeatRateCurve& heat_rate, double co2_rate) {
    if (!(co2_rate >= 0.0)) fail(ErrorKind::invalid_argument, "co2_rate must be nonnegative");
    if (heat_rate.mw.empty() || heat_rate.mw.size() != heat_rate.mmbtu_per_h.size()) {
        fail(ErrorKind::domain_mismatch, "generator " + std::to_string(gen.id) + ": empty heat-rate curve");
    }
    const double tol = 1e-9 * std::max(1.0, gen.p_max);
    if (heat_rate.mw.front() > gen.p_min + tol || heat_rate.mw.back() < gen.p_max - tol) {
        fail(ErrorKind::domain_mismatch,
             "generator " + std::to_string(gen.id) + ": heat-rate curve does not cover [p_min, p_max]");
    }
    EmissionsCurve out;
    out.co2_rate = co2_rate;
    out.mw = heat_rate.mw;
    out.tons_per_h.reserve(heat_rate.mmbtu_per_h.size());
    for (double fuel : heat_rate.mmbtu_per_h) out.tons_per_h.push_back(co2_rate * fuel);
    return out;
}

GeothermalRating set_geothermal_ratings(const HourlyProfile& profile) {
    if (profile.values.empty()) fail(ErrorKind::empty_profile, "geothermal generation profile is empty");
    double sum = 0.0;
    for (double v : profile.values) {
        if (!std::isfinite(v) || v < 0.0) {
            fail(ErrorKind::invalid_argument, "geothermal generation must be finite and nonnegative");
        }
        sum += v;
    }
    GeothermalRating r;
    r.p_max = sum / static_cast<double>(profile.values.size());
    r.p_min = 0.95 * r.p_max;
    return r;
}

Network match_spur_capacity(const Network& n) {
    Network out = n;
    std::unordered_map<BusId, std::size_t> index;
    for (std::size_t i = 0; i < n.buses.size(); ++i) index[n.buses[i].id] = i;

    struct Edge {
        std::size_t a, b;
        std::size_t branch;  // npos for DC lines
    };
    constexpr auto npos = static_cast<std::size_t>(-1);
    std::vector<std::vector<Edge>> adjacency(n.buses.size());
    for (std::size_t k = 0; k < n.branches.size(); ++k) {
        auto a = index.at(n.branches[k].from_bus), b = index.at(n.branches[k].to_bus);
        adjacency[a].push_back({a, b, k});
        adjacency[b].push_back({b, a, k});
    }
    for (const auto& dc : n.dc_lines) {
        auto a = index.at(dc.from_bus), b = index.at(dc.to_bus);
        adjacency[a].push_back({a, b, npos});
        adjacency[b].push_back({b, a, npos});
    }

    std::vector<double> bus_capacity(n.buses.size(), 0.0);
    for (const auto& g : n.generators) bus_capacity[index.at(g.bus)] += g.p_max;

    auto side_of = [&](std::size_t start, std::size_t skipped) {
        std::vector<char> seen(n.buses.size(), 0);
        std::vector<std::size_t> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (const auto& e : adjacency[v]) {
                if (e.branch == skipped || seen[e.b]) continue;
                seen[e.b] = 1;
                stack.push_back(e.b);
            }
        }
        return seen;
    };

    for (std::size_t k = 0; k < n.branches.size(); ++k) {
        const auto& br = n.branches[k];
        if (!br.is_spur) continue;
        auto a = index.at(br.from_bus), b = index.at(br.to_bus);
        auto from_side = side_of(a, k);
        if (from_side[b]) {
            fail(ErrorKind::spur_topology, "spur branch " + std::to_string(br.id) + " is not a bridge");
        }
        auto to_side = side_of(b, k);
        auto summarize = [&](const std::vector<char>& side) {
            std::size_t count = 0;
            bool has_demand = false;
            double capacity = 0.0;
            for (std::size_t v = 0; v < side.size(); ++v) {
                if (!side[v]) continue;
                ++count;
                has_demand = has_demand || n.buses[v].demand_participation;
                capacity += bus_capacity[v];
            }
            return std::tuple{count, has_demand, capacity};
        };
        auto [from_count, from_demand, from_capacity] = summarize(from_side);
        auto [to_count, to_demand, to_capacity] = summarize(to_side);
        double behind = 0.0;
        if (!from_demand && !to_demand) {
            behind = from_count <= to_count ? from_capacity : to_capacity;
        } else if (!from_demand) {
            behind = from_capacity;
        } else if (!to_demand) {
            behind = to_capacity;
        } else {
            fail(ErrorKind::spur_topology,
                 "spur branch " + std::to_string(br.id) + " does not isolate a generator-only subnetwork");
        }
        out.branches[k].capacity = std::max(br.capacity, behind);
    }
    return out;
}

}  // namespace synthgrid
