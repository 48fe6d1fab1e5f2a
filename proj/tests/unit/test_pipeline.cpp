#include <algorithm>

#include "../support/calibration_fixture.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "error.hpp"
#include "pipeline.hpp"

using namespace synthgrid;
using namespace testkit;
namespace fs = std::filesystem;

namespace {

const fs::path fixture = fs::path(SYNTHGRID_FIXTURES) / "three_bus";

Settings fixture_settings(const fs::path& out) {
    auto s = Settings::load(fixture / "run.toml");
    s.set("run.out", out.string());
    return s;
}

struct Captured {
    std::vector<std::string> lines;
    LogSink sink() {
        return [this](LogLevel, const std::string& m) { lines.push_back(m); };
    }
    bool has(const std::string& line) const { return std::find(lines.begin(), lines.end(), line) != lines.end(); }
};

Error stage_error(const std::string& stage, const RunConfig& c) {
    try {
        run_stage(stage, c, {});
    } catch (const Error& e) {
        return e;
    }
    FAIL("stage succeeded");
    return Error(ErrorKind::io, "");
}

double fuel_capacity(const Network& n, Fuel f) {
    double total = 0.0;
    for (const auto& g : n.generators) total += g.fuel == f ? g.p_max : 0.0;
    return total;
}

// Targets equal to the fixture's current coal and gas groups.
std::string identity_targets() {
    auto n = load_network(fixture / "case");
    std::string out = "state,fuel,target_capacity_mw,target_avg_price\n";
    for (Fuel f : {Fuel::coal, Fuel::natural_gas}) {
        double cap = 0.0, weighted = 0.0;
        for (const auto& g : n.generators) {
            if (g.fuel != f) continue;
            cap += g.p_max;
            weighted += g.p_max * mean_slope(g.cost_curve);
        }
        out += "TX," + std::string(to_string(f)) + "," + format_number(cap) + "," + format_number(weighted / cap) + "\n";
    }
    return out;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("identity targets reproduce the case") {
    auto dir = scratch_dir("pipe_identity");
    write_text(dir / "targets.csv", identity_targets());
    auto s = fixture_settings(dir / "out");
    s.set("inputs.targets", (dir / "targets.csv").string());
    s.set("inputs.geothermal", "");
    auto c = RunConfig::from_settings(s);
    run_stage("build", c, {});
    write_network(load_network(fixture / "case"), dir / "expected");
    for (const char* f : {"bus.csv", "branch.csv", "dcline.csv", "gen.csv", "zone.csv"}) {
        CHECK(read_text(c.case_out() / f) == read_text(dir / "expected" / f));
    }
}

TEST_CASE("doubled targets double the groups") {
    auto dir = scratch_dir("pipe_double");
    write_text(dir / "targets.csv", "state,fuel,target_capacity_mw,target_avg_price\nTX,coal,600,\nTX,natural_gas,500,\n");
    auto s = fixture_settings(dir / "out");
    s.set("inputs.targets", (dir / "targets.csv").string());
    auto c = RunConfig::from_settings(s);
    Captured log;
    run_stage("build", c, log.sink());
    auto before = load_network(fixture / "case");
    auto after = load_network(c.case_out());
    CHECK(fuel_capacity(after, Fuel::coal) == doctest::Approx(2 * fuel_capacity(before, Fuel::coal)));
    CHECK(fuel_capacity(after, Fuel::natural_gas) == doctest::Approx(2 * fuel_capacity(before, Fuel::natural_gas)));
    CHECK(log.has("capacity scale TX/coal: 2"));
}

TEST_CASE("missing targets file") {
    auto dir = scratch_dir("pipe_no_targets");
    auto s = fixture_settings(dir / "out");
    s.set("inputs.targets", (dir / "absent.csv").string());
    auto e = stage_error("build", RunConfig::from_settings(s));
    CHECK(e.kind() == ErrorKind::io);
    CHECK(std::string(e.what()).find("absent.csv") != std::string::npos);
    CHECK(std::string(e.what()).rfind("build: ", 0) == 0);
}

TEST_CASE("imputation and flag counts") {
    auto dir = scratch_dir("pipe_counts");
    auto s = fixture_settings(dir / "out");
    s.set("inputs.wind_uv", "");
    auto c = RunConfig::from_settings(s);
    run_stage("build", c, {});
    Captured log;
    run_stage("profiles", c, log.sink());
    CHECK(log.has("imputed: 3"));
    CHECK(log.has("flagged: 1"));
}

TEST_CASE("clean demand reports no imputations") {
    auto dir = scratch_dir("pipe_clean");
    std::string text = read_text(fixture / "inputs" / "demand_zone.csv"), clean;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == ',') line += "300";
        clean += line + "\n";
        start = end + 1;
    }
    write_text(dir / "demand.csv", clean);
    auto s = fixture_settings(dir / "out");
    s.set("inputs.demand_zone", (dir / "demand.csv").string());
    s.set("inputs.wind_uv", "");
    auto c = RunConfig::from_settings(s);
    run_stage("build", c, {});
    Captured log;
    run_stage("profiles", c, log.sink());
    CHECK(log.has("imputed: 0"));
}

TEST_CASE("profiles are reproducible") {
    auto dir = scratch_dir("pipe_repeat");
    std::vector<RunConfig> runs;
    for (const char* name : {"a", "b"}) {
        auto c = RunConfig::from_settings(fixture_settings(dir / name));
        run_stage("build", c, {});
        run_stage("profiles", c, {});
        runs.push_back(c);
    }
    for (const char* f : {"profile_demand.csv", "profile_wind.csv", "profile_solar.csv", "profile_hydro.csv"}) {
        auto a = read_text(runs[0].profiles_out() / f);
        CHECK_FALSE(a.empty());
        CHECK(a == read_text(runs[1].profiles_out() / f));
    }
}

TEST_CASE("simulate needs profiles") {
    auto dir = scratch_dir("pipe_no_profiles");
    auto c = RunConfig::from_settings(fixture_settings(dir / "out"));
    run_stage("build", c, {});
    auto e = stage_error("simulate", c);
    CHECK(e.kind() == ErrorKind::missing_profile);
    CHECK(std::string(e.what()).find("profiles stage") != std::string::npos);
}

TEST_CASE("simulate needs a built case") {
    auto dir = scratch_dir("pipe_no_case");
    auto e = stage_error("simulate", RunConfig::from_settings(fixture_settings(dir / "out")));
    CHECK(e.kind() == ErrorKind::io);
}

TEST_CASE("stages regenerate identical files") {
    auto dir = scratch_dir("pipe_regen");
    auto c = RunConfig::from_settings(fixture_settings(dir / "out"));
    c.windows = 2;
    for (const char* stage : {"build", "profiles", "simulate"}) run_stage(stage, c, {});
    auto first = read_text(c.simulate_out() / "log_hours.csv");
    fs::remove_all(c.simulate_out());
    run_stage("simulate", c, {});
    CHECK(read_text(c.simulate_out() / "log_hours.csv") == first);
}

}
