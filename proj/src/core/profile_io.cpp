#include "profile_io.hpp"

#include <charconv>
#include <cmath>

#include "csv.hpp"
#include "error.hpp"

namespace synthgrid {

namespace fs = std::filesystem;

namespace {

void require_file(const fs::path& path) {
    if (!fs::exists(path)) fail(ErrorKind::io, "missing input file " + path.string());
}

UtcHour row_time(const CsvTable::Row& row) {
    try {
        return parse_utc_hour(row.text("timestamp_utc"));
    } catch (const Error& e) {
        row.reject("timestamp_utc", e.what());
    }
}

}  // namespace

EntityId parse_entity_id(const std::string& text, const fs::path& source) {
    EntityId id = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(ErrorKind::parse, source.filename().string() + ": entity id '" + text + "' is not an integer");
    }
    return id;
}

std::map<std::string, HourlyProfile> read_series_csv(const fs::path& path, std::string_view key_column,
                                                     std::string_view value_column, bool allow_missing) {
    require_file(path);
    auto table = CsvTable::read(path, {key_column, "timestamp_utc", value_column});
    struct Points {
        std::map<UtcHour, double> values;
    };
    std::map<std::string, Points> by_key;
    for (auto& row : table) {
        auto t = row_time(row);
        double v = HourlyProfile::missing();
        if (auto x = row.optional_number(value_column)) {
            v = *x;
        } else if (!allow_missing) {
            row.reject(value_column, "missing value");
        }
        if (!by_key[row.text(key_column)].values.emplace(t, v).second) {
            row.reject("timestamp_utc", "duplicate timestamp for " + row.text(key_column));
        }
    }
    std::map<std::string, HourlyProfile> out;
    for (auto& [key, points] : by_key) {
        HourlyProfile p;
        p.start = points.values.begin()->first;
        auto last = points.values.rbegin()->first;
        p.values.assign(static_cast<std::size_t>(last - p.start) + 1, HourlyProfile::missing());
        for (auto& [t, v] : points.values) p.values[static_cast<std::size_t>(t - p.start)] = v;
        if (!allow_missing && p.missing_count() > 0) {
            fail(ErrorKind::parse, path.filename().string() + ": series '" + key + "' has gaps");
        }
        out.emplace(key, std::move(p));
    }
    return out;
}

std::vector<WindSample> read_wind_csv(const fs::path& path) {
    require_file(path);
    auto table = CsvTable::read(path, {"location", "timestamp_utc", "u", "v"});
    std::vector<WindSample> out;
    out.reserve(table.size());
    for (auto& row : table) {
        WindSample s;
        s.location = row.text("location");
        s.time = row_time(row);
        auto u = row.optional_number("u");
        auto v = row.optional_number("v");
        s.missing = !u || !v;
        s.u = u.value_or(0.0);
        s.v = v.value_or(0.0);
        out.push_back(std::move(s));
    }
    return out;
}

PowerCurve read_power_curve_csv(const fs::path& path) {
    require_file(path);
    auto table = CsvTable::read(path, {"speed_mps", "fraction"});
    if (table.size() < 2) fail(ErrorKind::parse, path.filename().string() + ": power curve needs at least two rows");
    PowerCurve c;
    for (auto& row : table) {
        c.speeds.push_back(row.number("speed_mps"));
        c.fractions.push_back(row.number("fraction"));
    }
    // First row is cut-in; the last row only marks cut-out.
    c.cut_in = c.speeds.front();
    c.cut_out = c.speeds.back();
    c.speeds.pop_back();
    c.fractions.pop_back();
    c.validate();
    return c;
}

std::map<std::string, TrackingMix> read_tracking_mix_csv(const fs::path& path) {
    require_file(path);
    auto table = CsvTable::read(path, {"interconnection", "fixed", "single", "dual"});
    std::map<std::string, TrackingMix> out;
    for (auto& row : table) {
        TrackingMix mix{row.number("fixed"), row.number("single"), row.number("dual")};
        try {
            mix.validate();
        } catch (const Error& e) {
            row.reject("fixed", e.what());
        }
        if (!out.emplace(row.text("interconnection"), mix).second) {
            row.reject("interconnection", "duplicate interconnection");
        }
    }
    return out;
}

std::map<EntityId, std::map<unsigned, double>> read_hydro_energy_csv(const fs::path& path) {
    require_file(path);
    auto table = CsvTable::read(path, {"plant_id", "month", "mwh"});
    std::map<EntityId, std::map<unsigned, double>> out;
    for (auto& row : table) {
        auto month = row.integer("month");
        if (month < 1 || month > 12) row.reject("month", "month must be 1..12");
        double mwh = row.number("mwh");
        if (mwh < 0.0) row.reject("mwh", "negative energy");
        if (!out[row.integer("plant_id")].emplace(static_cast<unsigned>(month), mwh).second) {
            row.reject("month", "duplicate month");
        }
    }
    return out;
}

void write_profiles_csv(const fs::path& path, const std::map<EntityId, HourlyProfile>& profiles) {
    CsvWriter w(path, {"entity_id", "timestamp_utc", "mw"});
    for (auto& [id, p] : profiles) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            w.row({format_number(id), format_utc_hour(p.time_at(i)),
                   p.is_missing(i) ? std::string{} : format_number(p.values[i])});
        }
    }
}

std::map<EntityId, HourlyProfile> read_profiles_csv(const fs::path& path) {
    auto series = read_series_csv(path, "entity_id", "mw", false);
    std::map<EntityId, HourlyProfile> out;
    for (auto& [key, p] : series) out.emplace(parse_entity_id(key, path), std::move(p));
    return out;
}

}  // namespace synthgrid
