#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace synthgrid {

namespace fs = std::filesystem;

const std::vector<std::string>& known_setting_keys() {
    static const std::vector<std::string> keys = {
        "run.out", "run.seed",
        "inputs.case", "inputs.targets", "inputs.geothermal", "inputs.historical", "inputs.demand_zone",
        "inputs.wind_uv", "inputs.irradiance", "inputs.hydro_energy", "inputs.hydro_shape", "inputs.power_curve",
        "inputs.tracking_mix",
        "horizon.start", "horizon.hours",
        "timeseries.sigma", "timeseries.gain_fixed", "timeseries.gain_single", "timeseries.gain_dual",
        "timeseries.geothermal_ramp_fraction",
        "harness.window_hours", "harness.windows", "harness.retry_cap", "harness.retry_factor",
        "harness.allow_load_shed", "harness.load_shed_cost", "harness.penalty",
        "upgrade.method", "upgrade.threshold", "upgrade.step", "upgrade.max_iterations", "upgrade.target",
        "upgrade.lmp_floor",
        "report.cap", "report.beta", "report.iterations",
    };
    return keys;
}

std::string env_name(const std::string& key, const std::string& prefix) {
    std::string out = prefix;
    for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

namespace {

bool known(const std::string& key) {
    const auto& k = known_setting_keys();
    return std::find(k.begin(), k.end(), key) != k.end();
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Settings Settings::parse(std::string_view text, const std::string& source) {
    Settings out;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
        // strip comments outside quotes
        std::string line;
        bool quoted = false;
        for (char c : raw) {
            if (c == '"') quoted = !quoted;
            if (c == '#' && !quoted) break;
            line += c;
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(ErrorKind::parse, where() + "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorKind::parse, where() + "expected key = value");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        if (!known(key)) fail(ErrorKind::parse, where() + "unknown setting '" + key + "'");
        if (value.size() >= 2 && value.front() == '"') {
            if (value.back() != '"') fail(ErrorKind::parse, where() + "unterminated string");
            value = value.substr(1, value.size() - 2);
            std::string unescaped;
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (value[i] == '\\' && i + 1 < value.size()) {
                    char c = value[++i];
                    unescaped += c == 'n' ? '\n' : c == 't' ? '\t' : c;
                } else {
                    unescaped += value[i];
                }
            }
            value = unescaped;
        } else if (value.empty() || value.front() == '"') {
            fail(ErrorKind::parse, where() + "missing value for '" + key + "'");
        }
        if (out.values_.count(key)) fail(ErrorKind::parse, where() + "duplicate setting '" + key + "'");
        out.values_[key] = {value, {}};
    }
    return out;
}

Settings Settings::load(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot read config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto out = parse(buffer.str(), path.string());
    const auto base = fs::absolute(path).parent_path();
    for (auto& [key, entry] : out.values_) entry.base = base;
    return out;
}

void Settings::set(const std::string& key, const std::string& value) {
    if (!known(key)) fail(ErrorKind::invalid_argument, "unknown setting '" + key + "'");
    values_[key] = {value, fs::current_path()};
}

std::optional<std::string> Settings::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second.value;
}

fs::path Settings::base_of(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() || it->second.base.empty() ? fs::current_path() : it->second.base;
}

std::vector<std::string> Settings::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

std::size_t Settings::apply_env(const std::string& prefix) {
    std::size_t applied = 0;
    for (const auto& key : known_setting_keys()) {
        if (const char* v = std::getenv(env_name(key, prefix).c_str())) {
            set(key, v);
            ++applied;
        }
    }
    return applied;
}

// ---- typed view ---------------------------------------------------------------

namespace {

class Reader {
public:
    explicit Reader(const Settings& s) : s_(s) {}

    double real(const std::string& key, double fallback) const {
        auto v = s_.get(key);
        if (!v) return fallback;
        double x = 0.0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
        if (ec != std::errc() || p != v->data() + v->size() || !std::isfinite(x)) bad(key, *v, "a number");
        return x;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        auto v = s_.get(key);
        if (!v) return fallback;
        std::uint64_t x = 0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
        if (ec != std::errc() || p != v->data() + v->size()) bad(key, *v, "a non-negative integer");
        return x;
    }

    bool boolean(const std::string& key, bool fallback) const {
        auto v = s_.get(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        bad(key, *v, "true or false");
    }

    std::optional<std::string> text(const std::string& key) const { return s_.get(key); }

    std::optional<fs::path> path(const std::string& key) const {
        auto v = s_.get(key);
        if (!v || v->empty()) return std::nullopt;
        fs::path p(*v);
        return p.is_absolute() ? p : (s_.base_of(key) / p).lexically_normal();
    }

private:
    [[noreturn]] static void bad(const std::string& key, const std::string& value, const char* expected) {
        fail(ErrorKind::invalid_argument, "setting " + key + " = '" + value + "' is not " + expected);
    }
    const Settings& s_;
};

}  // namespace

RunConfig RunConfig::from_settings(const Settings& s) {
    Reader r(s);
    RunConfig c;
    c.out = r.path("run.out").value_or(fs::current_path() / "out");
    c.seed = r.unsigned_integer("run.seed", c.seed);

    c.case_dir = r.path("inputs.case").value_or(fs::path{});
    c.targets = r.path("inputs.targets");
    c.geothermal = r.path("inputs.geothermal");
    c.historical = r.path("inputs.historical");
    c.demand_zone = r.path("inputs.demand_zone");
    c.wind_uv = r.path("inputs.wind_uv");
    c.irradiance = r.path("inputs.irradiance");
    c.hydro_energy = r.path("inputs.hydro_energy");
    c.hydro_shape = r.path("inputs.hydro_shape");
    c.power_curve = r.path("inputs.power_curve");
    c.tracking_mix = r.path("inputs.tracking_mix");

    c.start = parse_utc_hour(r.text("horizon.start").value_or("2016-01-01T00:00:00Z"));
    c.hours = r.unsigned_integer("horizon.hours", c.hours);
    if (c.hours == 0) fail(ErrorKind::invalid_argument, "horizon.hours must be positive");

    c.sigma = r.real("timeseries.sigma", c.sigma);
    c.gains.fixed = r.real("timeseries.gain_fixed", c.gains.fixed);
    c.gains.single_axis = r.real("timeseries.gain_single", c.gains.single_axis);
    c.gains.dual_axis = r.real("timeseries.gain_dual", c.gains.dual_axis);
    c.geothermal_ramp_fraction = r.real("timeseries.geothermal_ramp_fraction", c.geothermal_ramp_fraction);
    if (!(c.sigma > 0.0)) fail(ErrorKind::invalid_argument, "timeseries.sigma must be positive");

    c.window_hours = r.unsigned_integer("harness.window_hours", c.window_hours);
    c.windows = r.unsigned_integer("harness.windows", c.windows);
    c.harness.retry_cap = r.unsigned_integer("harness.retry_cap", c.harness.retry_cap);
    c.harness.retry_factor = r.real("harness.retry_factor", c.harness.retry_factor);
    c.harness.mpdcopf.allow_load_shed = r.boolean("harness.allow_load_shed", c.harness.mpdcopf.allow_load_shed);
    c.harness.mpdcopf.load_shed_cost = r.real("harness.load_shed_cost", c.harness.mpdcopf.load_shed_cost);
    c.harness.mpdcopf.penalty = r.real("harness.penalty", c.harness.mpdcopf.penalty);
    if (!(c.harness.retry_factor > 0.0 && c.harness.retry_factor < 1.0)) {
        fail(ErrorKind::invalid_argument, "harness.retry_factor must lie in (0, 1)");
    }
    if (!(c.harness.mpdcopf.penalty > 0.0)) fail(ErrorKind::invalid_argument, "harness.penalty must be positive");
    if (!(c.harness.mpdcopf.load_shed_cost > 0.0)) {
        fail(ErrorKind::invalid_argument, "harness.load_shed_cost must be positive");
    }

    c.upgrade_method = r.text("upgrade.method").value_or(c.upgrade_method);
    if (c.upgrade_method != "step" && c.upgrade_method != "soft") {
        fail(ErrorKind::invalid_argument, "upgrade.method must be 'step' or 'soft'");
    }
    c.policy.shadow_price_threshold = r.real("upgrade.threshold", c.policy.shadow_price_threshold);
    c.policy.step_size = r.real("upgrade.step", c.policy.step_size);
    c.policy.max_iterations = r.unsigned_integer("upgrade.max_iterations", c.policy.max_iterations);
    if (auto t = r.text("upgrade.target")) c.policy.target = parse_upgrade_target(*t);
    c.policy.lmp_floor = r.real("upgrade.lmp_floor", c.policy.lmp_floor);
    c.policy.validate();

    c.cost_cap = r.real("report.cap", c.cost_cap);
    c.cost_beta = r.real("report.beta", c.cost_beta);
    c.report_iterations = r.unsigned_integer("report.iterations", c.report_iterations);
    if (!(c.cost_cap > 0.0 && c.cost_cap < 1.0)) fail(ErrorKind::bad_cap, "report.cap must lie in (0, 1)");
    return c;
}

void RunConfig::validate_for(const std::string& stage) const {
    auto require = [](const std::optional<fs::path>& p, const char* key) {
        if (!p) fail(ErrorKind::invalid_argument, std::string("setting ") + key + " is required");
        if (!fs::exists(*p)) fail(ErrorKind::io, std::string(key) + ": no such file " + p->string());
    };
    auto optional = [](const std::optional<fs::path>& p, const char* key) {
        if (p && !fs::exists(*p)) fail(ErrorKind::io, std::string(key) + ": no such file " + p->string());
    };
    if (stage == "build") {
        if (case_dir.empty()) fail(ErrorKind::invalid_argument, "setting inputs.case is required");
        if (!fs::is_directory(case_dir)) fail(ErrorKind::io, "inputs.case: no such directory " + case_dir.string());
        optional(targets, "inputs.targets");
        optional(geothermal, "inputs.geothermal");
    } else if (stage == "profiles") {
        require(demand_zone, "inputs.demand_zone");
        optional(wind_uv, "inputs.wind_uv");
        optional(irradiance, "inputs.irradiance");
        optional(hydro_energy, "inputs.hydro_energy");
        optional(hydro_shape, "inputs.hydro_shape");
        optional(power_curve, "inputs.power_curve");
        optional(tracking_mix, "inputs.tracking_mix");
    } else if (stage == "report") {
        require(historical, "inputs.historical");
    } else if (stage != "simulate" && stage != "upgrade") {
        fail(ErrorKind::invalid_argument, "unknown stage '" + stage + "'");
    }
}

}  // namespace synthgrid
