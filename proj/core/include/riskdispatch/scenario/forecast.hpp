#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace riskdispatch::scenario {

/// Gaussian wind forecast N(mean, covariance) over W farms, in MW.
/// Construct through ForecastModel::create so the covariance is symmetrized,
/// PSD-repaired, and factored once.
class ForecastModel {
 public:
  static ForecastModel create(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance,
                              std::vector<int> farm_order = {});

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  /// V diag(sqrt(lambda)); factor * factor^T == covariance.
  const Eigen::MatrixXd& factor() const { return factor_; }
  /// Positions in GridCase::wind_farms, one per vector entry.
  const std::vector<int>& farm_order() const { return farm_order_; }
  int dimension() const { return static_cast<int>(mean_.size()); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd factor_;
  std::vector<int> farm_order_;
};

/// S x W matrix of i.i.d. draws; row s is scenario z(s).
struct ScenarioSet {
  Eigen::MatrixXd samples;
  std::uint64_t seed = 0;

  int count() const { return static_cast<int>(samples.rows()); }
  int dimension() const { return static_cast<int>(samples.cols()); }
};

struct SampleOptions {
  /// When set, draws are clipped to [0, capacity] per farm. Off by default:
  /// the forecast is an unbounded Gaussian.
  std::optional<Eigen::VectorXd> clip_capacity;
  /// Worker threads; any value yields the same rows.
  int jobs = 1;
};

/// Rows per independently seeded block. Block b draws from
/// derive_seed(seed, "scenario-sampling", b), so serial and threaded sampling
/// agree row for row.
inline constexpr int kSampleBlockRows = 4096;

/// Rows are mean + factor * xi with xi standard normal.
ScenarioSet sample(const ForecastModel& model, int count, std::uint64_t seed, const SampleOptions& options = {});

/// Same construction for an arbitrary seed domain (validation uses its own).
Eigen::MatrixXd draw_gaussian_rows(const ForecastModel& model, int count, std::uint64_t seed,
                                   std::string_view domain, int jobs = 1);

/// Unbiased sample covariance (divisor T-1) of a T x W history, symmetrized
/// and PSD-repaired. Requires T >= 2 and no NaN entries. Constant columns are
/// reported in `warnings`.
Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& history, std::vector<std::string>* warnings = nullptr);

/// Eigendecompose, clamp negative eigenvalues to zero, reassemble.
Eigen::MatrixXd repair_psd(const Eigen::MatrixXd& matrix);

}  // namespace riskdispatch::scenario
