#include <cmath>
#include <limits>
#include <random>

#include "../support/series_fixtures.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace synthgrid;
using namespace testkit;

namespace {

const double gap = HourlyProfile::missing();

HourlyProfile series(const char* start, std::vector<double> v) { return {parse_utc_hour(start), std::move(v), "MW"}; }

// Days starting Monday 2016-01-04, value(day, hour) filled by `f`.
HourlyProfile weeks(std::size_t days, auto f) {
    HourlyProfile p{parse_utc_hour("2016-01-04T00:00:00Z"), {}, "MW"};
    for (std::size_t d = 0; d < days; ++d) {
        for (unsigned h = 0; h < 24; ++h) p.values.push_back(f(d, h));
    }
    return p;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::io;
}

std::vector<WindSample> wind_grid(const std::string& location, std::size_t days) {
    std::vector<WindSample> out;
    auto start = parse_utc_hour("2016-04-01T00:00:00Z");
    for (std::size_t h = 0; h < days * 24; ++h) out.push_back({location, start + static_cast<std::int64_t>(h)});
    return out;
}

}  // namespace

TEST_SUITE("timeseries") {

TEST_CASE("proportional split") {
    auto zone = series("2016-01-01T00:00:00Z", {100.0});
    auto buses = disaggregate_demand(zone, {{1, 3.0}, {2, 1.0}});
    CHECK(buses.at(1).values[0] == doctest::Approx(75));
    CHECK(buses.at(2).values[0] == doctest::Approx(25));
    auto single = disaggregate_demand(zone, {{9, 0.7}});
    CHECK(single.at(9).values == zone.values);
    CHECK(kind_of([&] { disaggregate_demand(zone, {{1, 0.0}, {2, 0.0}}); }) == ErrorKind::zero_total_weight);
}

TEST_CASE("split conserves the zone total") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(0.0, 10.0), mw(0.0, 5000.0);
    for (int trial = 0; trial < 20; ++trial) {
        HourlyProfile zone{parse_utc_hour("2016-06-01T00:00:00Z"), {}, "MW"};
        for (int t = 0; t < 24; ++t) zone.values.push_back(mw(rng));
        std::vector<std::pair<BusId, double>> weights;
        for (BusId b = 1; b <= 5; ++b) weights.emplace_back(b, w(rng));
        auto buses = disaggregate_demand(zone, weights);
        for (std::size_t t = 0; t < 24; ++t) {
            double sum = 0.0;
            for (auto& [id, p] : buses) sum += p.values[t];
            CHECK(std::abs(sum - zone.values[t]) <= 1e-9 * std::max(1.0, zone.values[t]));
        }
    }
}

TEST_CASE("missing zone hours stay missing") {
    auto zone = series("2016-01-01T00:00:00Z", {10, gap, 30});
    auto buses = disaggregate_demand(zone, {{1, 1.0}, {2, 1.0}});
    CHECK(buses.at(1).is_missing(1));
    CHECK(buses.at(2).values[2] == doctest::Approx(15));
}

TEST_CASE("weekday hole takes neighbouring weekdays") {
    auto p = weeks(3, [](std::size_t d, unsigned h) {
        if (h != 14) return 50.0;
        return d == 0 ? 100.0 : d == 2 ? 120.0 : gap;
    });
    auto out = impute_missing_demand(p);
    CHECK(out.values[24 + 14] == doctest::Approx(110));
    CHECK(out.missing_count() == 0);
}

TEST_CASE("weekday hole skips the weekend") {
    // Friday 2016-01-08 13:00 missing; Thursday and next Monday donate.
    auto p = weeks(8, [](std::size_t d, unsigned h) {
        if (h != 13) return 1.0;
        if (d == 4) return gap;
        if (d == 3) return 40.0;
        if (d == 7) return 60.0;
        return 500.0;
    });
    CHECK(impute_missing_demand(p).values[4 * 24 + 13] == doctest::Approx(50));
}

TEST_CASE("saturday copied from sunday") {
    auto p = weeks(14, [](std::size_t d, unsigned h) {
        if (d == 5) return gap;
        return 1000.0 + 10.0 * d + h;
    });
    auto out = impute_missing_demand(p);
    for (unsigned h = 0; h < 24; ++h) CHECK(out.values[5 * 24 + h] == p.values[6 * 24 + h]);
}

TEST_CASE("whole weekend averages neighbouring weekends") {
    auto p = weeks(28, [](std::size_t d, unsigned h) {
        const auto week = d / 7, dow = d % 7;
        if (dow < 5) return 300.0 + h;
        if (week == 0) return 80.0;
        if (week == 1) return gap;
        if (week == 2) return 100.0;
        return 70.0;
    });
    auto out = impute_missing_demand(p);
    for (std::size_t d : {12u, 13u}) {
        for (unsigned h = 0; h < 24; ++h) CHECK(out.values[d * 24 + h] == doctest::Approx(90));
    }
}

TEST_CASE("imputation leaves present hours alone") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(100, 200);
    std::bernoulli_distribution hole(0.05);
    auto p = weeks(28, [&](std::size_t, unsigned) { return hole(rng) ? gap : u(rng); });
    auto out = impute_missing_demand(p);
    CHECK(out.missing_count() == 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p.is_missing(i)) CHECK(out.values[i] == p.values[i]);
    }
}

TEST_CASE("no donors") {
    auto p = weeks(2, [](std::size_t, unsigned h) { return h == 3 ? gap : 1.0; });
    CHECK(kind_of([&] { impute_missing_demand(p); }) == ErrorKind::no_donor_data);
}

TEST_CASE("constant profile has no anomalies") {
    CHECK(detect_anomalies(series("2016-01-01T00:00:00Z", std::vector<double>(48, 7.0))).empty());
    CHECK(kind_of([] { detect_anomalies(series("2016-01-01T00:00:00Z", {1, 2})); }) == ErrorKind::too_short);
}

TEST_CASE("single spike flags its hour only") {
    auto s = spiked_profile(1, 1);
    auto got = detect_anomalies(s.profile);
    CHECK(got == s.spikes);
    CHECK(got == reference_anomalies(s.profile.values, 5.0));
}

TEST_CASE("detector agrees with the reference pass") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto s = spiked_profile(seed, seed % 3);
        auto got = detect_anomalies(s.profile);
        CHECK(got == s.spikes);
        CHECK(got == reference_anomalies(s.profile.values, 5.0));
        CHECK(detect_anomalies(s.profile, std::numeric_limits<double>::infinity()).empty());
    }
}

TEST_CASE("interpolation") {
    auto one = interpolate_anomalies(series("2016-01-01T00:00:00Z", {100, 999, 120}), {1});
    CHECK(one.values[1] == doctest::Approx(110));
    auto two = interpolate_anomalies(series("2016-01-01T00:00:00Z", {90, 0, 0, 120}), {1, 2});
    CHECK(two.values[1] == doctest::Approx(100));
    CHECK(two.values[2] == doctest::Approx(110));
    auto same = series("2016-01-01T00:00:00Z", {1, 2, 3});
    CHECK(interpolate_anomalies(same, {}).values == same.values);
    CHECK(kind_of([&] { interpolate_anomalies(same, {0, 1, 2}); }) == ErrorKind::no_valid_neighbor);
}

TEST_CASE("spike removal restores the smooth series") {
    auto s = spiked_profile(42, 2);
    auto clean = interpolate_anomalies(s.profile, detect_anomalies(s.profile));
    for (auto t : s.spikes) {
        CHECK(clean.values[t] == doctest::Approx(0.5 * (s.profile.values[t - 1] + s.profile.values[t + 1])));
    }
}

TEST_CASE("degenerate donor range") {
    auto grid = wind_grid("A", 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i].u = 3.0;
        grid[i].v = -1.0 + static_cast<double>(i % 5);
    }
    grid[24 * 3 + 5].missing = true;
    grid[24 * 3 + 5].u = std::numeric_limits<double>::quiet_NaN();
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) CHECK(impute_wind_uv(grid, seed)[24 * 3 + 5].u == 3.0);
}

TEST_CASE("imputed wind stays in donor extrema") {
    auto grid = wind_grid("A", 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i].u = (i / 24 == 0) ? 2.0 : 6.0;
        grid[i].v = (i / 24 == 0) ? -4.0 : 1.0;
    }
    for (std::size_t h = 0; h < 24; ++h) grid[48 + h].missing = true;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto out = impute_wind_uv(grid, seed);
        for (std::size_t h = 0; h < 24; ++h) {
            const auto& s = out[48 + h];
            CHECK_FALSE(s.missing);
            CHECK((s.u >= 2.0 && s.u <= 6.0));
            CHECK((s.v >= -4.0 && s.v <= 1.0));
        }
    }
}

TEST_CASE("wind imputation is seeded") {
    auto grid = wind_grid("B", 10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    std::bernoulli_distribution hole(0.2);
    for (auto& s : grid) {
        s.u = u(rng);
        s.v = u(rng);
        s.missing = hole(rng);
    }
    auto a = impute_wind_uv(grid, 17), b = impute_wind_uv(grid, 17), c = impute_wind_uv(grid, 18);
    bool differs = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a[i].u == b[i].u);
        CHECK(a[i].v == b[i].v);
        if (!grid[i].missing) CHECK(a[i].u == grid[i].u);
        differs = differs || a[i].u != c[i].u;
    }
    CHECK(differs);
}

TEST_CASE("wind without donors") {
    auto grid = wind_grid("C", 1);
    for (auto& s : grid) s.missing = true;
    CHECK(kind_of([&] { impute_wind_uv(grid, 1); }) == ErrorKind::no_donor_data);
}

TEST_CASE("power curve") {
    auto curve = PowerCurve::iec_class2();
    CHECK_NOTHROW(curve.validate());
    CHECK(wind_power(3, 4, curve, 100) == doctest::Approx(100 * curve.fraction_at(5.0)));
    CHECK(std::hypot(3.0, 4.0) == 5.0);
    CHECK(wind_power(1, 1, curve, 100) == 0.0);
    CHECK(wind_power(0, 2.9, curve, 100) == 0.0);
    // Plateau: last table entry is rated output.
    CHECK(curve.fractions.back() == 1.0);
    CHECK(wind_power(0, 16, curve, 100) == doctest::Approx(100));
    CHECK(wind_power(0, 25, curve, 100) == 0.0);
    CHECK(wind_power(0, 24.9, curve, 100) == doctest::Approx(100));
}

TEST_CASE("power curve is monotone and continuous below cut-out") {
    auto curve = PowerCurve::iec_class2();
    double prev = 0.0;
    for (double s = 0.0; s < 24.99; s += 0.01) {
        double f = curve.fraction_at(s);
        CHECK(f >= prev - 1e-15);
        CHECK(f - prev <= 0.02);
        prev = f;
    }
}

TEST_CASE("solar") {
    auto dark = series("2016-06-01T00:00:00Z", std::vector<double>(24, 0.0));
    for (double v : solar_power(dark, {1, 0, 0}, 50).values) CHECK(v == 0.0);
    auto noon = series("2016-06-01T00:00:00Z", {1000.0});
    CHECK(solar_power(noon, {1, 0, 0}, 50).values[0] == doctest::Approx(0.85 * 50));
    auto bright = series("2016-06-01T00:00:00Z", {1100.0, 2000.0});
    for (double v : solar_power(bright, {0, 0, 1}, 50).values) CHECK(v <= 50.0);
    CHECK(kind_of([&] { solar_power(noon, {0.5, 0.4, 0.0}, 50); }) == ErrorKind::bad_mix);
    CHECK(kind_of([&] { solar_power(noon, {1.2, -0.2, 0.0}, 50); }) == ErrorKind::bad_mix);
}

TEST_CASE("more tracking never lowers output") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> w(0, 1200);
    HourlyProfile irr{parse_utc_hour("2016-06-01T00:00:00Z"), {}, "W/m2"};
    for (int t = 0; t < 24 * 7; ++t) irr.values.push_back(w(rng));
    auto eastern = solar_power(irr, {0.67, 0.33, 0.0}, 80);
    auto texas = solar_power(irr, {0.08, 0.92, 0.0}, 80);
    for (std::size_t t = 0; t < irr.size(); ++t) CHECK(texas.values[t] >= eastern.values[t]);
}

TEST_CASE("flat hydro month") {
    auto shape = series("2016-01-01T00:00:00Z", std::vector<double>(744, 1.0));
    auto r = hydro_profile(shape, {{1, 744.0 * 50}}, 100);
    for (double v : r.profile.values) CHECK(v == doctest::Approx(50));
    CHECK(r.fallback_months.empty());
}

TEST_CASE("shaped hydro keeps monthly energy") {
    std::vector<double> v(744, 1.0);
    for (std::size_t t = 0; t < 744; t += 2) v[t] = 0.0;
    for (std::size_t t = 1; t < 744; t += 2) v[t] = 2.0;  // peak 2x mean
    auto r = hydro_profile(series("2016-01-01T00:00:00Z", v), {{1, 744.0 * 30}}, 1000);
    double sum = 0.0;
    for (double x : r.profile.values) sum += x;
    CHECK(std::abs(sum - 744.0 * 30) <= 1e-9 * 744.0 * 30);
    CHECK(r.profile.values[1] == doctest::Approx(60));
    CHECK(r.fallback_months.empty());
}

TEST_CASE("hydro falls back to the monthly average") {
    std::vector<double> v(744 + 696);  // January and February 2016
    for (std::size_t t = 0; t < v.size(); ++t) v[t] = t % 2 ? 3.0 : 1.0;
    const double jan = 744.0 * 80, feb = 696.0 * 40;
    auto r = hydro_profile(series("2016-01-01T00:00:00Z", v), {{1, jan}, {2, feb}}, 100);
    // January would peak at 3/2 · 80 = 120 > 100.
    CHECK(r.fallback_months == std::vector<unsigned>{1});
    double jan_sum = 0.0, feb_sum = 0.0;
    for (std::size_t t = 0; t < 744; ++t) {
        CHECK(r.profile.values[t] == doctest::Approx(80));
        jan_sum += r.profile.values[t];
    }
    for (std::size_t t = 744; t < v.size(); ++t) feb_sum += r.profile.values[t];
    CHECK(std::abs(jan_sum - jan) <= 1e-9 * jan);
    CHECK(std::abs(feb_sum - feb) <= 1e-9 * feb);
    CHECK(r.profile.values[745] == doctest::Approx(60));
}

TEST_CASE("hydro month that cannot fit") {
    auto shape = series("2016-01-01T00:00:00Z", std::vector<double>(744, 1.0));
    CHECK(kind_of([&] { hydro_profile(shape, {{1, 744.0 * 150}}, 100); }) == ErrorKind::infeasible_month);
    auto flat = hydro_profile(shape, {{1, 744.0 * 10}}, 100, true);
    CHECK(flat.profile.values[0] == doctest::Approx(10));
}

}
