#pragma once

#include <string>
#include <vector>

namespace gssa {

/// One out-of-sample forecast: made at `origin` (the 1-based last observed
/// period), targeting period origin + horizon.
struct ForecastRecord {
    int origin = 0;
    int horizon = 0;
    int target = 0;
    double forecast = 0.0;
    double actual = 0.0;
    std::string method{};
};

using ForecastTable = std::vector<ForecastRecord>;

} // namespace gssa
