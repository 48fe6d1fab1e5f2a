#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "utc_time.hpp"

namespace synthgrid {

// Hourly series; timestamps are start + index. Missing hours hold NaN.
struct HourlyProfile {
    UtcHour start;
    std::vector<double> values;
    std::string unit = "MW";

    static constexpr double missing() { return std::numeric_limits<double>::quiet_NaN(); }

    std::size_t size() const { return values.size(); }
    bool is_missing(std::size_t i) const { return std::isnan(values[i]); }
    UtcHour time_at(std::size_t i) const { return start + static_cast<std::int64_t>(i); }
    std::size_t missing_count() const {
        std::size_t n = 0;
        for (double v : values) n += std::isnan(v) ? 1 : 0;
        return n;
    }
};

}  // namespace synthgrid
