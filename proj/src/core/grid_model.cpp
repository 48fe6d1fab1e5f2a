#include "grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "error.hpp"

namespace synthgrid {

namespace {

constexpr std::pair<Fuel, std::string_view> kFuelNames[] = {
    {Fuel::coal, "coal"},       {Fuel::natural_gas, "natural_gas"}, {Fuel::fuel_oil, "fuel_oil"},
    {Fuel::nuclear, "nuclear"}, {Fuel::hydro, "hydro"},             {Fuel::wind, "wind"},
    {Fuel::solar, "solar"},     {Fuel::geothermal, "geothermal"},   {Fuel::other, "other"},
};

constexpr std::pair<BranchKind, std::string_view> kBranchKindNames[] = {
    {BranchKind::line, "line"},
    {BranchKind::transformer, "transformer"},
    {BranchKind::transformer_winding, "transformer_winding"},
};

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) return 0.0;
    if (xs.size() == 1 || x <= xs.front()) {
        if (xs.size() == 1) return ys.front();
        double slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        return ys.front() + slope * (x - xs.front());
    }
    if (x >= xs.back()) {
        auto n = xs.size();
        double slope = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
        return ys.back() + slope * (x - xs.back());
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    auto k = static_cast<std::size_t>(it - xs.begin());
    double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

}  // namespace

std::string_view to_string(Fuel fuel) {
    for (auto& [f, name] : kFuelNames)
        if (f == fuel) return name;
    return "other";
}

std::string_view to_string(BranchKind kind) {
    for (auto& [k, name] : kBranchKindNames)
        if (k == kind) return name;
    return "line";
}

Fuel parse_fuel(std::string_view text) {
    for (auto& [f, name] : kFuelNames)
        if (name == text) return f;
    fail(ErrorKind::parse, "unknown fuel '" + std::string(text) + "'");
}

BranchKind parse_branch_kind(std::string_view text) {
    for (auto& [k, name] : kBranchKindNames)
        if (name == text) return k;
    fail(ErrorKind::parse, "unknown branch kind '" + std::string(text) + "'");
}

bool is_variable_renewable(Fuel fuel) {
    return fuel == Fuel::wind || fuel == Fuel::solar || fuel == Fuel::hydro;
}

bool is_renewable(Fuel fuel) { return is_variable_renewable(fuel) || fuel == Fuel::geothermal; }

bool is_must_run(Fuel fuel) { return fuel == Fuel::nuclear || fuel == Fuel::geothermal; }

double CostCurve::mean_marginal_cost() const {
    if (marginal_costs.empty()) return 0.0;
    if (degenerate()) return marginal_costs.front();
    double span = breakpoints.back() - breakpoints.front();
    double total = 0.0;
    for (std::size_t k = 0; k < marginal_costs.size(); ++k) {
        total += marginal_costs[k] * (breakpoints[k + 1] - breakpoints[k]);
    }
    return total / span;
}

double CostCurve::cost_above_start(double p) const {
    double cost = 0.0;
    if (degenerate()) return 0.0;
    for (std::size_t k = 0; k < marginal_costs.size(); ++k) {
        double lo = breakpoints[k];
        double hi = breakpoints[k + 1];
        if (p <= lo) break;
        cost += marginal_costs[k] * (std::min(p, hi) - lo);
    }
    return cost;
}

bool CostCurve::well_formed() const {
    if (breakpoints.empty()) return false;
    if (breakpoints.size() == 1) return marginal_costs.size() == 1;
    if (marginal_costs.size() + 1 != breakpoints.size()) return false;
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > breakpoints[k - 1])) return false;
    }
    return true;
}

bool CostCurve::convex() const {
    for (std::size_t k = 1; k < marginal_costs.size(); ++k) {
        if (marginal_costs[k] < marginal_costs[k - 1]) return false;
    }
    return true;
}

double HeatRateCurve::evaluate(double p) const { return interpolate(mw, mmbtu_per_h, p); }

double EmissionsCurve::evaluate(double p) const { return interpolate(mw, tons_per_h, p); }

std::optional<std::size_t> Network::bus_index(BusId id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> Network::branch_index(EntityId id) const {
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (branches[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> Network::generator_index(EntityId id) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i].id == id) return i;
    return std::nullopt;
}

std::string Network::interconnection_of(const Bus& bus) const {
    auto it = zones.find(bus.zone_id);
    return it == zones.end() ? std::string{} : it->second.interconnection;
}

std::set<std::string> Network::interconnections() const {
    std::set<std::string> out;
    for (auto& [id, zone] : zones) out.insert(zone.interconnection);
    return out;
}

std::vector<std::set<BusId>> connected_components(const Network& network,
                                                  std::string_view interconnection) {
    bool known = false;
    for (auto& [id, zone] : network.zones) known = known || zone.interconnection == interconnection;
    if (!known) {
        fail(ErrorKind::unknown_interconnection,
             "unknown interconnection '" + std::string(interconnection) + "'");
    }

    std::unordered_map<BusId, std::vector<BusId>> adjacency;
    std::set<BusId> members;
    for (auto& bus : network.buses) {
        if (network.interconnection_of(bus) == interconnection) {
            members.insert(bus.id);
            adjacency[bus.id];
        }
    }
    for (auto& br : network.branches) {
        if (members.count(br.from_bus) && members.count(br.to_bus)) {
            adjacency[br.from_bus].push_back(br.to_bus);
            adjacency[br.to_bus].push_back(br.from_bus);
        }
    }

    std::vector<std::set<BusId>> components;
    std::unordered_set<BusId> seen;
    for (BusId root : members) {
        if (seen.count(root)) continue;
        std::set<BusId> component;
        std::deque<BusId> queue{root};
        seen.insert(root);
        while (!queue.empty()) {
            BusId b = queue.front();
            queue.pop_front();
            component.insert(b);
            for (BusId nb : adjacency[b]) {
                if (seen.insert(nb).second) queue.push_back(nb);
            }
        }
        components.push_back(std::move(component));
    }
    return components;
}

std::vector<Violation> validate_network(const Network& n) {
    std::vector<Violation> out;
    auto add = [&](std::string entity, auto id, std::string rule, std::string detail = {}) {
        out.push_back({std::move(entity), std::to_string(id), std::move(rule), std::move(detail)});
    };

    std::unordered_set<BusId> bus_ids;
    for (auto& bus : n.buses) {
        if (!bus_ids.insert(bus.id).second) add("bus", bus.id, "ids unique");
        if (!(bus.base_kv > 0.0)) add("bus", bus.id, "base_kv > 0");
        if (!(bus.population_weight >= 0.0)) add("bus", bus.id, "population_weight ≥ 0");
        if (bus.demand_participation && !n.zones.count(bus.zone_id)) {
            add("bus", bus.id, "zone exists", "zone " + std::to_string(bus.zone_id));
        }
    }

    auto check_endpoints = [&](const char* entity, EntityId id, BusId from, BusId to) {
        if (!bus_ids.count(from)) add(entity, id, "endpoint exists", "bus " + std::to_string(from));
        if (!bus_ids.count(to)) add(entity, id, "endpoint exists", "bus " + std::to_string(to));
        if (from == to) add(entity, id, "from_bus ≠ to_bus");
    };

    std::unordered_set<EntityId> ids;
    for (auto& br : n.branches) {
        if (!ids.insert(br.id).second) add("branch", br.id, "ids unique");
        check_endpoints("branch", br.id, br.from_bus, br.to_bus);
        if (!(br.reactance > 0.0)) add("branch", br.id, "reactance > 0");
        if (!(br.capacity >= 0.0)) add("branch", br.id, "capacity ≥ 0");
    }

    ids.clear();
    for (auto& dc : n.dc_lines) {
        if (!ids.insert(dc.id).second) add("dcline", dc.id, "ids unique");
        check_endpoints("dcline", dc.id, dc.from_bus, dc.to_bus);
        if (!(dc.capacity >= 0.0)) add("dcline", dc.id, "capacity ≥ 0");
    }

    ids.clear();
    for (auto& g : n.generators) {
        if (!ids.insert(g.id).second) add("generator", g.id, "ids unique");
        if (!bus_ids.count(g.bus)) add("generator", g.id, "endpoint exists", "bus " + std::to_string(g.bus));
        if (!(g.p_min >= 0.0)) add("generator", g.id, "p_min ≥ 0");
        if (!(g.p_min <= g.p_max)) add("generator", g.id, "p_min ≤ p_max");
        if (!(g.ramp_limit >= 0.0)) add("generator", g.id, "ramp_limit ≥ 0");
        if (!(g.no_load_cost >= 0.0)) add("generator", g.id, "no_load_cost ≥ 0");
        if (!(g.co2_rate >= 0.0)) add("generator", g.id, "co2_rate ≥ 0");
        const auto& c = g.cost_curve;
        if (!c.well_formed()) {
            add("generator", g.id, "cost curve breakpoints strictly increasing");
        } else {
            if (!c.convex()) add("generator", g.id, "cost curve convex");
            bool spans = nearly_equal(c.breakpoints.front(), g.p_min) &&
                         nearly_equal(c.breakpoints.back(), g.p_max) &&
                         (!c.degenerate() || nearly_equal(g.p_min, g.p_max));
            if (!spans) add("generator", g.id, "cost curve spans [p_min, p_max]");
        }
        const auto& hr = g.heat_rate;
        if (hr.mw.size() != hr.mmbtu_per_h.size()) {
            add("generator", g.id, "heat rate curve well formed");
        } else {
            for (std::size_t k = 0; k < hr.mw.size(); ++k) {
                if (hr.mmbtu_per_h[k] < 0.0) {
                    add("generator", g.id, "heat rate nonnegative");
                    break;
                }
                if (k > 0 && (!(hr.mw[k] > hr.mw[k - 1]) || hr.mmbtu_per_h[k] < hr.mmbtu_per_h[k - 1])) {
                    add("generator", g.id, "heat rate non-decreasing");
                    break;
                }
            }
        }
    }

    if (out.empty()) {
        for (auto& ic : n.interconnections()) {
            bool has_buses = std::any_of(n.buses.begin(), n.buses.end(),
                                         [&](const Bus& b) { return n.interconnection_of(b) == ic; });
            if (has_buses && connected_components(n, ic).size() > 1) {
                out.push_back({"interconnection", ic, "connected", {}});
            }
        }
    }
    return out;
}

}  // namespace synthgrid
