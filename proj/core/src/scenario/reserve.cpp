#include "riskdispatch/scenario/reserve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "riskdispatch/error.hpp"

namespace riskdispatch::scenario {

std::string_view to_string(ReserveMethod method) {
  switch (method) {
    case ReserveMethod::min: return "min";
    case ReserveMethod::min_plus_delta: return "min-plus-delta";
    case ReserveMethod::order_statistic: return "order-statistic";
  }
  return "unknown";
}

namespace {

void require_samples(const ScenarioSet& scenarios) {
  if (scenarios.count() < 1) throw ValidationError("scenario set is empty");
}

}  // namespace

ReserveVector reserve_min(const ScenarioSet& scenarios) {
  require_samples(scenarios);
  ReserveVector out;
  out.method = ReserveMethod::min;
  out.z_res = scenarios.samples.colwise().minCoeff().transpose().cwiseMax(0.0);
  return out;
}

ReserveVector reserve_boosted(const ScenarioSet& scenarios, const Eigen::VectorXd& delta) {
  if (delta.size() != scenarios.dimension())
    throw ValidationError("delta has length " + std::to_string(delta.size()) + ", expected " +
                          std::to_string(scenarios.dimension()));
  if (!delta.allFinite() || (delta.array() < 0.0).any()) throw ValidationError("delta must be finite and >= 0");
  ReserveVector out = reserve_min(scenarios);
  out.z_res = (out.z_res + delta).cwiseMax(0.0);
  out.method = ReserveMethod::min_plus_delta;
  return out;
}

int order_statistic_index(int sample_count, double alpha) {
  if (sample_count < 1) throw ValidationError("order statistic needs at least one sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("risk level alpha must lie in (0, 1)");
  double tail = alpha * static_cast<double>(sample_count);
  const double nearest = std::round(tail);
  if (std::abs(tail - nearest) <= 1e-9 * std::max(1.0, tail)) tail = nearest;
  const int k = sample_count - static_cast<int>(std::floor(tail));
  if (k < 1 || k > sample_count)
    throw ValidationError("sample count " + std::to_string(sample_count) + " too small for alpha " +
                          std::to_string(alpha));
  return k;
}

ReserveVector reserve_order_statistic(const ScenarioSet& scenarios, double alpha) {
  require_samples(scenarios);
  const int s = scenarios.count();
  const int k = order_statistic_index(s, alpha);

  ReserveVector out;
  out.method = ReserveMethod::order_statistic;
  out.alpha = alpha;
  out.z_res.resize(scenarios.dimension());
  std::vector<double> column(static_cast<std::size_t>(s));
  for (int m = 0; m < scenarios.dimension(); ++m) {
    for (int i = 0; i < s; ++i) column[i] = scenarios.samples(i, m);
    // k-th largest == element k-1 of a descending order.
    std::nth_element(column.begin(), column.begin() + (k - 1), column.end(), std::greater<>());
    out.z_res(m) = std::max(0.0, column[k - 1]);
  }
  return out;
}

}  // namespace riskdispatch::scenario
