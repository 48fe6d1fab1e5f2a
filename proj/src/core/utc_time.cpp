#include "utc_time.hpp"

#include <charconv>
#include <cstdio>

#include "error.hpp"

namespace synthgrid {

namespace {

using namespace std::chrono;

int read_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
    int v = 0;
    if (pos + len > s.size()) fail(ErrorKind::parse, "bad UTC timestamp '" + std::string(whole) + "'");
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc() || ptr != s.data() + pos + len) {
        fail(ErrorKind::parse, "bad UTC timestamp '" + std::string(whole) + "'");
    }
    return v;
}

sys_days to_days(UtcHour t) {
    auto h = t.hours_since_epoch;
    auto d = h >= 0 ? h / 24 : -((-h + 23) / 24);
    return sys_days{days{d}};
}

}  // namespace

UtcHour parse_utc_hour(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') {
        fail(ErrorKind::parse, "bad UTC timestamp '" + std::string(text) + "'");
    }
    int y = read_int(s, 0, 4, text);
    int mo = read_int(s, 5, 2, text);
    int d = read_int(s, 8, 2, text);
    int hh = read_int(s, 11, 2, text);
    int mm = read_int(s, 14, 2, text);
    int ss = 0;
    if (s.size() > 16) {
        if (s.size() != 19 || s[16] != ':') fail(ErrorKind::parse, "bad UTC timestamp '" + std::string(text) + "'");
        ss = read_int(s, 17, 2, text);
    }
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23) fail(ErrorKind::parse, "bad UTC timestamp '" + std::string(text) + "'");
    if (mm != 0 || ss != 0) {
        fail(ErrorKind::parse, "timestamp '" + std::string(text) + "' is not aligned to the hour");
    }
    auto days_since = sys_days{ymd}.time_since_epoch().count();
    return UtcHour{static_cast<std::int64_t>(days_since) * 24 + hh};
}

std::string format_utc_hour(UtcHour t) {
    auto dd = to_days(t);
    year_month_day ymd{dd};
    auto hh = t.hours_since_epoch - static_cast<std::int64_t>(dd.time_since_epoch().count()) * 24;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00:00Z", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hh));
    return buf;
}

unsigned month_of(UtcHour t) { return static_cast<unsigned>(year_month_day{to_days(t)}.month()); }

unsigned hour_of_day(UtcHour t) {
    auto dd = to_days(t);
    return static_cast<unsigned>(t.hours_since_epoch - static_cast<std::int64_t>(dd.time_since_epoch().count()) * 24);
}

std::int64_t day_index(UtcHour t) { return to_days(t).time_since_epoch().count(); }

bool is_weekend(UtcHour t) {
    weekday wd{to_days(t)};
    return wd == Saturday || wd == Sunday;
}

}  // namespace synthgrid
