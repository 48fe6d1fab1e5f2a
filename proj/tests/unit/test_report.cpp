#include <cmath>
#include <random>

#include "../support/builders.hpp"
#include "doctest.h"
#include "error.hpp"
#include "report.hpp"

using namespace synthgrid;
using namespace testkit;

namespace {

SimulationLog constant_log(const Network& n, std::size_t hours, std::vector<double> mw) {
    SimulationLog log;
    log.hours = hours;
    for (const auto& g : n.generators) log.generator_ids.push_back(g.id);
    for (double p : mw) log.dispatch.push_back(std::vector<double>(hours, p));
    return log;
}

ComparisonResult one_row(const std::string& state, Fuel fuel, double sim, double hist) {
    GenerationTable s, h;
    s.twh[{state, fuel}] = sim;
    h.twh[{state, fuel}] = hist;
    return compare(s, h);
}

double multiplier_of(const Network& n, const ComparisonResult& c, double cap = 0.05) {
    std::vector<CostMultiplier> m;
    revise_costs(n, c, cap, 1.0, &m);
    REQUIRE(m.size() == 1);
    return m[0].multiplier;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("constant unit over a leap year") {
    Network n = empty_network();
    add_bus(n, 1);
    add_gen(n, 1, 1, 200, 10, Fuel::coal);
    auto table = aggregate_generation(constant_log(n, 8784, {100}), n);
    CHECK(table.twh.at({"TX", Fuel::coal}) == doctest::Approx(0.8784).epsilon(1e-12));
}

TEST_CASE("empty dispatch aggregates to zero") {
    Network n = empty_network();
    add_bus(n, 1);
    add_gen(n, 1, 1, 200, 10, Fuel::coal);
    auto table = aggregate_generation(constant_log(n, 24, {0}), n);
    for (auto& [key, v] : table.twh) CHECK(v == 0.0);
}

TEST_CASE("group-by matches a second pass") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> mw(0, 300);
    Network n = empty_network();
    add_bus(n, 1);
    const char* states[] = {"TX", "CA"};
    const Fuel fuels[] = {Fuel::coal, Fuel::wind, Fuel::hydro};
    for (int i = 0; i < 12; ++i) add_gen(n, i + 1, 1, 300, 0, fuels[i % 3], 0, 1e6, states[i % 2]);
    SimulationLog log = constant_log(n, 48, std::vector<double>(12, 0.0));
    for (auto& row : log.dispatch) {
        for (auto& v : row) v = mw(rng);
    }
    auto table = aggregate_generation(log, n);
    std::map<GenerationKey, double> oracle;
    double total = 0.0;
    for (std::size_t g = 0; g < 12; ++g) {
        for (double v : log.dispatch[g]) {
            oracle[{n.generators[g].state, n.generators[g].fuel}] += v / 1e6;
            total += v / 1e6;
        }
    }
    double sum = 0.0;
    for (auto& [key, v] : oracle) {
        CHECK(table.twh.at(key) == doctest::Approx(v).epsilon(1e-12));
        sum += table.twh.at(key);
    }
    CHECK(std::abs(sum - total) <= 1e-9 * total);
}

TEST_CASE("3-4-5 metrics") {
    GenerationTable s, h;
    s.twh[{"TX", Fuel::coal}] = 13;
    h.twh[{"TX", Fuel::coal}] = 10;
    s.twh[{"TX", Fuel::wind}] = 1;
    h.twh[{"TX", Fuel::wind}] = 5;
    auto c = compare(s, h);
    CHECK(c.euclidean == doctest::Approx(5));
    CHECK(c.sum_abs == doctest::Approx(7));
    REQUIRE(c.rows.size() == 2);
    CHECK(c.rows[0].fuel == Fuel::coal);
    CHECK(c.rows[0].error == doctest::Approx(3));
    CHECK(c.rows[1].error == doctest::Approx(-4));
    auto swapped = compare(h, s);
    CHECK(swapped.euclidean == doctest::Approx(c.euclidean));
    CHECK(swapped.sum_abs == doctest::Approx(c.sum_abs));
    auto same = compare(s, s);
    CHECK(same.euclidean == 0.0);
    CHECK(same.sum_abs == 0.0);
}

TEST_CASE("one-sided keys count as zero with a warning") {
    GenerationTable s, h;
    s.twh[{"CA", Fuel::solar}] = 2;
    h.twh[{"WA", Fuel::hydro}] = 1;
    auto c = compare(s, h);
    CHECK(c.rows.size() == 2);
    CHECK(c.warnings.size() == 2);
    CHECK(c.sum_abs == doctest::Approx(3));
}

TEST_CASE("multiplier rule") {
    Network n = empty_network();
    add_bus(n, 1);
    add_gen(n, 1, 1, 100, 20, Fuel::coal);
    CHECK(multiplier_of(n, one_row("TX", Fuel::coal, 1.0, 1.0)) == 1.0);
    CHECK(multiplier_of(n, one_row("TX", Fuel::coal, 1.5, 1.0)) == doctest::Approx(1.05).epsilon(1e-15));
    CHECK(multiplier_of(n, one_row("TX", Fuel::coal, 0.98, 1.0)) == doctest::Approx(0.98).epsilon(1e-12));
    CHECK(multiplier_of(n, one_row("TX", Fuel::coal, 0.2, 1.0)) == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(multiplier_of(n, one_row("TX", Fuel::coal, 0.3, 0.0)) == doctest::Approx(1.05).epsilon(1e-15));
    auto out = revise_costs(n, one_row("TX", Fuel::coal, 1.5, 1.0));
    CHECK(out.generators[0].cost_curve.marginal_costs[0] == doctest::Approx(21));
}

TEST_CASE("sim equal to hist is the identity") {
    Network n = empty_network();
    add_bus(n, 1);
    add_gen(n, 1, 1, 100, 20, Fuel::coal);
    auto out = revise_costs(revise_costs(n, one_row("TX", Fuel::coal, 2, 2)), one_row("TX", Fuel::coal, 2, 2));
    CHECK(out.generators[0].cost_curve.marginal_costs == n.generators[0].cost_curve.marginal_costs);
}

TEST_CASE("bad cap") {
    Network n = empty_network();
    for (double cap : {0.0, 1.0, -0.1, 2.0}) {
        try {
            revise_costs(n, {}, cap);
            FAIL("expected BadCap");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::bad_cap);
        }
    }
}

TEST_CASE("multipliers stay inside the cap") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> twh(0.0, 50.0);
    std::bernoulli_distribution zero(0.1);
    const char* states[] = {"TX", "CA", "WA", "NV"};
    const Fuel fuels[] = {Fuel::coal, Fuel::natural_gas, Fuel::hydro, Fuel::wind};
    Network n = empty_network();
    add_bus(n, 1);
    EntityId id = 1;
    for (auto s : states) {
        for (auto f : fuels) {
            auto& g = add_gen(n, id++, 1, 100, 20, f, 0, 1e6, s);
            g.cost_curve = {{0, 50, 100}, {10, 30}};
        }
    }
    for (int trial = 0; trial < 500; ++trial) {
        GenerationTable sim, hist;
        for (auto s : states) {
            for (auto f : fuels) {
                sim.twh[{s, f}] = zero(rng) ? 0.0 : twh(rng);
                hist.twh[{s, f}] = zero(rng) ? 0.0 : twh(rng);
            }
        }
        std::vector<CostMultiplier> m;
        auto out = revise_costs(n, compare(sim, hist), 0.05, 1.0, &m);
        for (auto& x : m) {
            CHECK(x.multiplier >= 0.95);
            CHECK(x.multiplier <= 1.05);
        }
        for (std::size_t g = 0; g < out.generators.size(); ++g) {
            double r = out.generators[g].cost_curve.marginal_costs[0] / n.generators[g].cost_curve.marginal_costs[0];
            CHECK(r >= 0.95 - 1e-15);
            CHECK(r <= 1.05 + 1e-15);
            CHECK(out.generators[g].cost_curve.convex());
        }
    }
}

TEST_CASE("report files") {
    auto dir = scratch_dir("report_files");
    emit_report(ComparisonResult{}, dir);
    CHECK(read_text(dir / "comparison.csv") == "state,fuel,simulated_twh,historical_twh,error_twh\n");
    CHECK(read_text(dir / "comparison.svg").find("<svg") != std::string::npos);

    GenerationTable s, h;
    s.twh[{"TX", Fuel::coal}] = 1.25;
    h.twh[{"TX", Fuel::coal}] = 1.0;
    s.twh[{"TX", Fuel::wind}] = 0.5;
    h.twh[{"TX", Fuel::wind}] = 0.75;
    auto c = compare(s, h);
    emit_report(c, dir);
    auto csv = read_text(dir / "comparison.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    auto svg = read_text(dir / "comparison.svg");
    emit_report(c, dir);
    CHECK(read_text(dir / "comparison.svg") == svg);
    CHECK(svg == comparison_svg(c));
}

}
