#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace synthgrid {

// Hour-aligned UTC instant, stored as whole hours since the Unix epoch.
struct UtcHour {
    std::int64_t hours_since_epoch = 0;

    friend auto operator<=>(const UtcHour&, const UtcHour&) = default;
    UtcHour operator+(std::int64_t h) const { return {hours_since_epoch + h}; }
    std::int64_t operator-(UtcHour other) const { return hours_since_epoch - other.hours_since_epoch; }
};

// Accepts "YYYY-MM-DDTHH:MM:SSZ", "YYYY-MM-DD HH:MM:SS" and "YYYY-MM-DDTHH:MM" forms.
// Throws ParseError when the text is malformed or not on the hour.
UtcHour parse_utc_hour(std::string_view text);
std::string format_utc_hour(UtcHour t);

unsigned month_of(UtcHour t);         // 1..12
unsigned hour_of_day(UtcHour t);      // 0..23
std::int64_t day_index(UtcHour t);    // days since epoch
bool is_weekend(UtcHour t);

}  // namespace synthgrid
