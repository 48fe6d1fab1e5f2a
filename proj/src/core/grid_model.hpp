#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace synthgrid {

using BusId = std::int64_t;
using EntityId = std::int64_t;

enum class Fuel { coal, natural_gas, fuel_oil, nuclear, hydro, wind, solar, geothermal, other };
enum class BranchKind { line, transformer, transformer_winding };

std::string_view to_string(Fuel fuel);
std::string_view to_string(BranchKind kind);
Fuel parse_fuel(std::string_view text);
BranchKind parse_branch_kind(std::string_view text);

// Variable renewable fuels get their availability from an hourly profile.
bool is_variable_renewable(Fuel fuel);
// Renewable buses are the ones the LMP-floor upgrade target looks at.
bool is_renewable(Fuel fuel);
// Units that hold p >= p_min in dispatch; everything else may go to zero.
bool is_must_run(Fuel fuel);

struct Bus {
    BusId id = 0;
    std::int64_t zone_id = 0;
    std::string state;
    double base_kv = 0.0;
    double population_weight = 0.0;
    bool demand_participation = false;
};

struct Branch {
    EntityId id = 0;
    BusId from_bus = 0;
    BusId to_bus = 0;
    double reactance = 0.0;  // per unit
    double capacity = 0.0;   // MW
    BranchKind kind = BranchKind::line;
    bool is_spur = false;
};

struct DcLine {
    EntityId id = 0;
    BusId from_bus = 0;
    BusId to_bus = 0;
    double capacity = 0.0;
};

// Convex piecewise-linear cost over [breakpoints.front(), breakpoints.back()].
// marginal_costs[k] is the slope on [breakpoints[k], breakpoints[k+1]].
// A unit with p_min == p_max keeps a single breakpoint and a single price.
struct CostCurve {
    std::vector<double> breakpoints;
    std::vector<double> marginal_costs;

    std::size_t segment_count() const { return marginal_costs.size(); }
    bool degenerate() const { return breakpoints.size() == 1; }
    // Capacity-averaged slope over the curve's span.
    double mean_marginal_cost() const;
    // Cost of producing p relative to the curve start.
    double cost_above_start(double p) const;
    bool convex() const;
    bool well_formed() const;
};

// Fuel input (MMBtu/h) as a piecewise-linear function of output (MW).
struct HeatRateCurve {
    std::vector<double> mw;
    std::vector<double> mmbtu_per_h;

    bool empty() const { return mw.empty(); }
    double evaluate(double p) const;
};

struct EmissionsCurve {
    double co2_rate = 0.0;            // t CO2 per MMBtu
    std::vector<double> mw;           // breakpoints, same as the heat-rate curve
    std::vector<double> tons_per_h;   // co2_rate * heat rate at each breakpoint

    double evaluate(double p) const;
};

struct Generator {
    EntityId id = 0;
    BusId bus = 0;
    Fuel fuel = Fuel::other;
    std::string state;
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp_limit = 0.0;  // MW per hour
    double no_load_cost = 0.0;
    CostCurve cost_curve;
    HeatRateCurve heat_rate;
    double co2_rate = 0.0;
};

struct Zone {
    std::int64_t id = 0;
    std::string name;
    std::string interconnection;
};

struct Violation {
    std::string entity;  // "bus", "branch", "dcline", "generator", "zone", "interconnection"
    std::string id;
    std::string rule;
    std::string detail;  // e.g. "bus 99" for a dangling endpoint

    friend bool operator==(const Violation&, const Violation&) = default;
};

class Network {
public:
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<DcLine> dc_lines;
    std::vector<Generator> generators;
    std::map<std::int64_t, Zone> zones;
    double base_mva = 100.0;

    // Index lookups; return nullopt when the id is absent.
    std::optional<std::size_t> bus_index(BusId id) const;
    std::optional<std::size_t> branch_index(EntityId id) const;
    std::optional<std::size_t> generator_index(EntityId id) const;

    // Interconnection of a bus via its zone, empty when the zone is unknown.
    std::string interconnection_of(const Bus& bus) const;
    std::set<std::string> interconnections() const;
};

std::vector<Violation> validate_network(const Network& network);

// Partition of the interconnection's buses under AC-branch adjacency. Each set
// is ordered, and sets are ordered by their smallest bus id.
std::vector<std::set<BusId>> connected_components(const Network& network,
                                                  std::string_view interconnection);

// Case directory I/O (bus.csv, branch.csv, dcline.csv, gen.csv, zone.csv).
Network load_network(const std::filesystem::path& directory);
void write_network(const Network& network, const std::filesystem::path& directory);

std::string encode_curve_json(const Generator& gen);
void decode_curve_json(std::string_view json, Generator& gen);

}  // namespace synthgrid
