#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "riskdispatch/scenario/forecast.hpp"

namespace riskdispatch::scenario {

/// JSON with `mean`, `covariance` (row-major flat list) and `farm_order`.
std::string serialize_forecast(const ForecastModel& model);
ForecastModel parse_forecast(std::string_view json_text);
ForecastModel load_forecast_file(const std::filesystem::path& path);

}  // namespace riskdispatch::scenario
