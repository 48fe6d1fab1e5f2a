#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harness.hpp"
#include "timeseries.hpp"
#include "upgrade.hpp"
#include "utc_time.hpp"

namespace synthgrid {

// Flat key/value view of the config, keys in "section.key" form. Values are
// kept as text and converted by RunConfig::from_settings.
class Settings {
public:
    // Subset of TOML: [section] headers, key = value lines, "strings",
    // numbers, true/false, # comments.
    static Settings parse(std::string_view text, const std::string& source = "config");
    static Settings load(const std::filesystem::path& path);

    // Relative paths set here resolve against the current directory.
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    std::filesystem::path base_of(const std::string& key) const;
    // SYNTHGRID_SECTION_KEY overrides section.key for every known key.
    std::size_t apply_env(const std::string& prefix = "SYNTHGRID_");

    std::vector<std::string> keys() const;

private:
    struct Entry {
        std::string value;
        std::filesystem::path base;  // directory relative paths resolve against
    };
    std::map<std::string, Entry> values_;
};

// Keys accepted in the config, in documentation order.
const std::vector<std::string>& known_setting_keys();
std::string env_name(const std::string& key, const std::string& prefix = "SYNTHGRID_");

struct RunConfig {
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;

    // inputs
    std::filesystem::path case_dir;
    std::optional<std::filesystem::path> targets, geothermal, historical;
    std::optional<std::filesystem::path> demand_zone, wind_uv, irradiance, hydro_energy, hydro_shape;
    std::optional<std::filesystem::path> power_curve, tracking_mix;

    // horizon
    UtcHour start;
    std::size_t hours = 8784;

    // timeseries
    double sigma = 5.0;
    ArrayGains gains;
    double geothermal_ramp_fraction = 0.05;

    // harness
    std::size_t window_hours = 144;
    std::size_t windows = 0;  // 0 = all
    HarnessOptions harness;

    // upgrade
    std::string upgrade_method = "step";  // step | soft
    UpgradePolicy policy;

    // report
    double cost_cap = 0.05;
    double cost_beta = 1.0;
    std::size_t report_iterations = 1;

    static RunConfig from_settings(const Settings& settings);
    // Checks that every configured input needed by `stage` exists.
    void validate_for(const std::string& stage) const;

    std::filesystem::path case_out() const { return out / "case"; }
    std::filesystem::path profiles_out() const { return out / "profiles"; }
    std::filesystem::path simulate_out() const { return out / "simulate"; }
    std::filesystem::path upgrade_out() const { return out / "upgrade"; }
    std::filesystem::path report_out() const { return out / "report"; }
};

}  // namespace synthgrid
