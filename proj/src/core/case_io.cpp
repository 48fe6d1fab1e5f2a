#include <json.hpp>

#include "csv.hpp"
#include "error.hpp"
#include "grid_model.hpp"

namespace synthgrid {

namespace fs = std::filesystem;

namespace {

CsvTable open_case_file(const fs::path& dir, const char* name, const std::vector<std::string_view>& columns) {
    auto path = dir / name;
    if (!fs::exists(path)) fail(ErrorKind::io, "missing case file " + path.string());
    return CsvTable::read(path, columns);
}

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw std::invalid_argument(std::string(key) + " is not an array");
    for (const auto& v : arr) {
        if (!v.is_number()) throw std::invalid_argument(std::string(key) + " holds a non-number");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::string encode_curve_json(const Generator& gen) {
    nlohmann::json j;
    j["breakpoints"] = gen.cost_curve.breakpoints;
    j["marginal_costs"] = gen.cost_curve.marginal_costs;
    if (!gen.heat_rate.empty()) {
        j["heat_rate_mw"] = gen.heat_rate.mw;
        j["heat_rate_mmbtu_per_h"] = gen.heat_rate.mmbtu_per_h;
    }
    return j.dump();
}

void decode_curve_json(std::string_view text, Generator& gen) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("curve_json must be an object");
    for (auto& [key, value] : j.items()) {
        if (key != "breakpoints" && key != "marginal_costs" && key != "heat_rate_mw" &&
            key != "heat_rate_mmbtu_per_h") {
            throw std::invalid_argument("unknown curve key '" + key + "'");
        }
    }
    gen.cost_curve.breakpoints = number_array(j, "breakpoints");
    gen.cost_curve.marginal_costs = number_array(j, "marginal_costs");
    gen.heat_rate.mw = number_array(j, "heat_rate_mw");
    gen.heat_rate.mmbtu_per_h = number_array(j, "heat_rate_mmbtu_per_h");
}

Network load_network(const fs::path& dir) {
    if (!fs::is_directory(dir)) fail(ErrorKind::io, "case directory not found: " + dir.string());
    // Open everything first so a missing file is reported before any parse error.
    auto zone_csv = open_case_file(dir, "zone.csv", {"zone_id", "name", "interconnection"});
    auto bus_csv = open_case_file(
        dir, "bus.csv", {"id", "zone_id", "state", "base_kv", "population_weight", "demand_participation"});
    auto branch_csv = open_case_file(
        dir, "branch.csv", {"id", "from", "to", "reactance_pu", "capacity_mw", "kind", "is_spur"});
    auto dc_csv = open_case_file(dir, "dcline.csv", {"id", "from", "to", "capacity_mw"});
    auto gen_csv = open_case_file(dir, "gen.csv",
                                  {"id", "bus", "fuel", "state", "p_min_mw", "p_max_mw", "ramp_mw_per_h",
                                   "no_load_cost", "curve_json", "co2_rate"});

    Network n;
    for (auto& row : zone_csv) {
        Zone z{row.integer("zone_id"), row.text("name"), row.text("interconnection")};
        if (!n.zones.emplace(z.id, z).second) row.reject("zone_id", "duplicate zone id");
    }
    for (auto& row : bus_csv) {
        n.buses.push_back({row.integer("id"), row.integer("zone_id"), row.text("state"), row.number("base_kv"),
                           row.number("population_weight"), row.flag("demand_participation")});
    }
    for (auto& row : branch_csv) {
        Branch br;
        br.id = row.integer("id");
        br.from_bus = row.integer("from");
        br.to_bus = row.integer("to");
        br.reactance = row.number("reactance_pu");
        br.capacity = row.number("capacity_mw");
        try {
            br.kind = parse_branch_kind(row.text("kind"));
        } catch (const Error& e) {
            row.reject("kind", e.what());
        }
        br.is_spur = row.flag("is_spur");
        n.branches.push_back(br);
    }
    for (auto& row : dc_csv) {
        n.dc_lines.push_back({row.integer("id"), row.integer("from"), row.integer("to"), row.number("capacity_mw")});
    }
    for (auto& row : gen_csv) {
        Generator g;
        g.id = row.integer("id");
        g.bus = row.integer("bus");
        try {
            g.fuel = parse_fuel(row.text("fuel"));
        } catch (const Error& e) {
            row.reject("fuel", e.what());
        }
        g.state = row.text("state");
        g.p_min = row.number("p_min_mw");
        g.p_max = row.number("p_max_mw");
        g.ramp_limit = row.number("ramp_mw_per_h");
        g.no_load_cost = row.number("no_load_cost");
        g.co2_rate = row.number("co2_rate");
        try {
            decode_curve_json(row.text("curve_json"), g);
        } catch (const std::invalid_argument& e) {
            row.reject("curve_json", e.what());
        }
        n.generators.push_back(std::move(g));
    }

    auto violations = validate_network(n);
    if (!violations.empty()) {
        const auto& v = violations.front();
        std::string message = v.rule == "endpoint exists" ? v.entity + " " + v.id + " → " + v.detail
                                                          : v.entity + " " + v.id + ": " + v.rule;
        if (violations.size() > 1) message += " (+" + std::to_string(violations.size() - 1) + " more)";
        fail(ErrorKind::integrity, message);
    }
    return n;
}

void write_network(const Network& n, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

    {
        CsvWriter w(dir / "zone.csv", {"zone_id", "name", "interconnection"});
        for (auto& [id, z] : n.zones) w.row({format_number(z.id), z.name, z.interconnection});
    }
    {
        CsvWriter w(dir / "bus.csv", {"id", "zone_id", "state", "base_kv", "population_weight", "demand_participation"});
        for (auto& b : n.buses) {
            w.row({format_number(b.id), format_number(b.zone_id), b.state, format_number(b.base_kv),
                   format_number(b.population_weight), b.demand_participation ? "1" : "0"});
        }
    }
    {
        CsvWriter w(dir / "branch.csv", {"id", "from", "to", "reactance_pu", "capacity_mw", "kind", "is_spur"});
        for (auto& br : n.branches) {
            w.row({format_number(br.id), format_number(br.from_bus), format_number(br.to_bus),
                   format_number(br.reactance), format_number(br.capacity), std::string(to_string(br.kind)),
                   br.is_spur ? "1" : "0"});
        }
    }
    {
        CsvWriter w(dir / "dcline.csv", {"id", "from", "to", "capacity_mw"});
        for (auto& dc : n.dc_lines) {
            w.row({format_number(dc.id), format_number(dc.from_bus), format_number(dc.to_bus),
                   format_number(dc.capacity)});
        }
    }
    {
        CsvWriter w(dir / "gen.csv", {"id", "bus", "fuel", "state", "p_min_mw", "p_max_mw", "ramp_mw_per_h",
                                      "no_load_cost", "curve_json", "co2_rate"});
        for (auto& g : n.generators) {
            w.row({format_number(g.id), format_number(g.bus), std::string(to_string(g.fuel)), g.state,
                   format_number(g.p_min), format_number(g.p_max), format_number(g.ramp_limit),
                   format_number(g.no_load_cost), encode_curve_json(g), format_number(g.co2_rate)});
        }
    }
}

}  // namespace synthgrid
