#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"

namespace synthgrid {

namespace fs = std::filesystem;

GenerationTable aggregate_generation(const SimulationLog& log, const Network& n) {
    GenerationTable table;
    for (std::size_t i = 0; i < log.generator_ids.size(); ++i) {
        auto g = n.generator_index(log.generator_ids[i]);
        if (!g) fail(ErrorKind::integrity, "log generator " + std::to_string(log.generator_ids[i]) + " not in network");
        const auto& gen = n.generators[*g];
        double mwh = 0.0;
        for (double p : log.dispatch[i]) mwh += p;
        table.twh[{gen.state, gen.fuel}] += mwh / 1e6;
    }
    return table;
}

GenerationTable load_historical(const fs::path& path) {
    if (!fs::exists(path)) fail(ErrorKind::io, "missing historical generation file " + path.string());
    auto csv = CsvTable::read(path, {"state", "fuel", "twh"});
    GenerationTable table;
    for (const auto& row : csv) {
        Fuel fuel;
        try {
            fuel = parse_fuel(row.text("fuel"));
        } catch (const Error& e) {
            row.reject("fuel", e.what());
        }
        double twh = row.number("twh");
        if (twh < 0.0) row.reject("twh", "must be ≥ 0");
        if (!table.twh.emplace(GenerationKey{row.text("state"), fuel}, twh).second) {
            row.reject("state", "duplicate (state, fuel)");
        }
    }
    return table;
}

ComparisonResult compare(const GenerationTable& sim, const GenerationTable& hist) {
    std::set<GenerationKey> keys;
    for (const auto& [k, v] : sim.twh) keys.insert(k);
    for (const auto& [k, v] : hist.twh) keys.insert(k);
    ComparisonResult out;
    double squares = 0.0;
    for (const auto& key : keys) {
        ComparisonRow row{key.first, key.second, 0.0, 0.0, 0.0};
        auto s = sim.twh.find(key);
        auto h = hist.twh.find(key);
        const std::string label = key.first + "/" + std::string(to_string(key.second));
        if (s == sim.twh.end()) {
            out.warnings.push_back(label + " missing from simulated table, treated as 0");
        } else {
            row.simulated = s->second;
        }
        if (h == hist.twh.end()) {
            out.warnings.push_back(label + " missing from historical table, treated as 0");
        } else {
            row.historical = h->second;
        }
        row.error = row.simulated - row.historical;
        squares += row.error * row.error;
        out.sum_abs += std::abs(row.error);
        out.rows.push_back(std::move(row));
    }
    out.euclidean = std::sqrt(squares);
    return out;
}

Network revise_costs(const Network& n, const ComparisonResult& cmp, double cap, double beta,
                     std::vector<CostMultiplier>* multipliers) {
    if (!(cap > 0.0 && cap < 1.0)) fail(ErrorKind::bad_cap, "cost revision cap must lie in (0, 1)");
    if (!(beta >= 0.0) || !std::isfinite(beta)) fail(ErrorKind::invalid_argument, "beta must be finite and ≥ 0");
    Network out = n;
    for (const auto& row : cmp.rows) {
        double m = 1.0;
        if (row.simulated != row.historical) {
            m = row.historical > 0.0
                    ? std::clamp(1.0 + beta * (row.simulated - row.historical) / row.historical, 1.0 - cap, 1.0 + cap)
                    : 1.0 + cap;
        }
        if (multipliers) multipliers->push_back({row.state, row.fuel, m});
        if (m == 1.0) continue;
        for (auto& g : out.generators) {
            if (g.state != row.state || g.fuel != row.fuel) continue;
            for (double& c : g.cost_curve.marginal_costs) c *= m;
        }
    }
    return out;
}

namespace {

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string comparison_svg(const ComparisonResult& cmp) {
    const double group_width = 60.0, left = 60.0, top = 30.0, plot_height = 240.0;
    const double width = left + 20.0 + group_width * static_cast<double>(std::max<std::size_t>(cmp.rows.size(), 1));
    const double height = top + plot_height + 70.0;
    double peak = 0.0;
    for (const auto& r : cmp.rows) peak = std::max({peak, r.simulated, r.historical});
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\"" << fixed(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    s << "<text x=\"" << fixed(left, 0) << "\" y=\"16\" font-size=\"12\">Energy by state and fuel (TWh)</text>\n";
    s << "<rect x=\"" << fixed(width - 150, 0) << "\" y=\"6\" width=\"10\" height=\"10\" fill=\"#4878a8\"/>"
      << "<text x=\"" << fixed(width - 136, 0) << "\" y=\"15\">simulated</text>\n";
    s << "<rect x=\"" << fixed(width - 80, 0) << "\" y=\"6\" width=\"10\" height=\"10\" fill=\"#a0a0a0\"/>"
      << "<text x=\"" << fixed(width - 66, 0) << "\" y=\"15\">historical</text>\n";
    const double base = top + plot_height;
    s << "<line x1=\"" << fixed(left, 0) << "\" y1=\"" << fixed(base, 0) << "\" x2=\"" << fixed(width - 10, 0)
      << "\" y2=\"" << fixed(base, 0) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fixed(left - 4, 0) << "\" y=\"" << fixed(top + 4, 0) << "\" text-anchor=\"end\">"
      << fixed(peak, 3) << "</text>\n";
    for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
        const auto& r = cmp.rows[i];
        const double x = left + 10.0 + group_width * static_cast<double>(i);
        auto bar = [&](double value, double offset, const char* colour) {
            const double h = peak > 0.0 ? plot_height * value / peak : 0.0;
            s << "<rect x=\"" << fixed(x + offset) << "\" y=\"" << fixed(base - h) << "\" width=\"20\" height=\""
              << fixed(h) << "\" fill=\"" << colour << "\"/>\n";
        };
        bar(r.simulated, 0.0, "#4878a8");
        bar(r.historical, 22.0, "#a0a0a0");
        s << "<text x=\"" << fixed(x + 21) << "\" y=\"" << fixed(base + 14) << "\" text-anchor=\"middle\">"
          << xml_escape(r.state) << "</text>\n";
        s << "<text x=\"" << fixed(x + 21) << "\" y=\"" << fixed(base + 26) << "\" text-anchor=\"middle\">"
          << xml_escape(to_string(r.fuel)) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void emit_report(const ComparisonResult& cmp, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
    {
        CsvWriter w(dir / "comparison.csv", {"state", "fuel", "simulated_twh", "historical_twh", "error_twh"});
        for (const auto& r : cmp.rows) {
            w.row({r.state, std::string(to_string(r.fuel)), format_number(r.simulated), format_number(r.historical),
                   format_number(r.error)});
        }
    }
    {
        CsvWriter w(dir / "comparison_metrics.csv", {"metric", "value"});
        w.row({"euclidean_twh", format_number(cmp.euclidean)});
        w.row({"sum_abs_twh", format_number(cmp.sum_abs)});
    }
    const auto svg_path = dir / "comparison.svg";
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) fail(ErrorKind::io, "cannot write " + svg_path.string());
    svg << comparison_svg(cmp);
    if (!svg) fail(ErrorKind::io, "write failed for " + svg_path.string());
}

}  // namespace synthgrid
