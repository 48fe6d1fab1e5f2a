#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grid_model.hpp"
#include "hourly_profile.hpp"
#include "timeseries.hpp"

namespace synthgrid {

// Reads a long-format series file (key, timestamp_utc, value). Each key's
// series runs from its first to its last timestamp; absent or empty cells are
// missing (NaN) when allow_missing, a ParseError otherwise.
std::map<std::string, HourlyProfile> read_series_csv(const std::filesystem::path& path, std::string_view key_column,
                                                     std::string_view value_column, bool allow_missing);

std::vector<WindSample> read_wind_csv(const std::filesystem::path& path);
PowerCurve read_power_curve_csv(const std::filesystem::path& path);
std::map<std::string, TrackingMix> read_tracking_mix_csv(const std::filesystem::path& path);
// plant_id → month → MWh
std::map<EntityId, std::map<unsigned, double>> read_hydro_energy_csv(const std::filesystem::path& path);

// profile_<kind>.csv: entity_id,timestamp_utc,mw
void write_profiles_csv(const std::filesystem::path& path, const std::map<EntityId, HourlyProfile>& profiles);
std::map<EntityId, HourlyProfile> read_profiles_csv(const std::filesystem::path& path);

EntityId parse_entity_id(const std::string& text, const std::filesystem::path& source);

}  // namespace synthgrid
