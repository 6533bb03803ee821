#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "riskdispatch/scenario/forecast.hpp"

namespace riskdispatch::scenario {

enum class ReserveMethod { min, min_plus_delta, order_statistic };

std::string_view to_string(ReserveMethod method);

/// Per-farm upper bound on scheduled wind, z_res >= 0 entrywise.
struct ReserveVector {
  Eigen::VectorXd z_res;
  double alpha = 0.0;  // 0 unless method == order_statistic
  ReserveMethod method = ReserveMethod::min;
};

/// z_res[m] = max(0, min_s z_m(s)).
ReserveVector reserve_min(const ScenarioSet& scenarios);

/// z_res = max(0, min_s z(s)) + delta, delta >= 0.
ReserveVector reserve_boosted(const ScenarioSet& scenarios, const Eigen::VectorXd& delta);

/// k = ceil((1 - alpha) S), computed as S - floor(alpha S) with alpha S snapped
/// to the nearest integer when within 1e-9 of it, so 0.95 * 100 gives 95.
int order_statistic_index(int sample_count, double alpha);

/// Per farm, the k-th largest sample (k from order_statistic_index), truncated
/// at zero.
ReserveVector reserve_order_statistic(const ScenarioSet& scenarios, double alpha);

}  // namespace riskdispatch::scenario
