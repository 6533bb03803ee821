#include "riskdispatch/scenario/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "riskdispatch/error.hpp"
#include "riskdispatch/random.hpp"

namespace riskdispatch::scenario {

Eigen::MatrixXd repair_psd(const Eigen::MatrixXd& matrix) {
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  if (sym.size() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw SolverError("eigendecomposition failed during PSD repair");
  if (eig.eigenvalues().minCoeff() >= 0.0) return sym;
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd repaired = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (repaired + repaired.transpose());
}

ForecastModel ForecastModel::create(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance,
                                    std::vector<int> farm_order) {
  const auto w = mean.size();
  if (covariance.rows() != w || covariance.cols() != w)
    throw ValidationError("forecast covariance must be " + std::to_string(w) + "x" + std::to_string(w));
  if (!mean.allFinite()) throw ValidationError("forecast mean has non-finite entries");
  if (!covariance.allFinite()) throw ValidationError("forecast covariance has non-finite entries");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError("forecast covariance is not symmetric");
  if (farm_order.empty()) {
    farm_order.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < static_cast<int>(w); ++i) farm_order[i] = i;
  }
  if (static_cast<Eigen::Index>(farm_order.size()) != w)
    throw ValidationError("farm_order length does not match the forecast dimension");

  ForecastModel model;
  model.mean_ = std::move(mean);
  model.covariance_ = repair_psd(covariance);
  model.farm_order_ = std::move(farm_order);
  if (w > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.covariance_);
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    model.factor_ = eig.eigenvectors() * roots.asDiagonal();
  } else {
    model.factor_.resize(0, 0);
  }
  return model;
}

Eigen::MatrixXd draw_gaussian_rows(const ForecastModel& model, int count, std::uint64_t seed,
                                   std::string_view domain, int jobs) {
  if (count < 1) throw ValidationError("sample count must be at least 1");
  const int w = model.dimension();
  Eigen::MatrixXd out(count, w);
  const int blocks = (count + kSampleBlockRows - 1) / kSampleBlockRows;

  auto fill_block = [&](int b) {
    NormalStream normal(derive_seed(seed, domain, static_cast<std::uint64_t>(b)));
    Eigen::VectorXd xi(w);
    const int first = b * kSampleBlockRows;
    const int last = std::min(count, first + kSampleBlockRows);
    for (int s = first; s < last; ++s) {
      for (int j = 0; j < w; ++j) xi(j) = normal.next();
      out.row(s) = (model.mean() + model.factor() * xi).transpose();
    }
  };

  jobs = std::clamp(jobs, 1, blocks);
  if (jobs == 1) {
    for (int b = 0; b < blocks; ++b) fill_block(b);
  } else {
    std::vector<std::jthread> workers;
    for (int t = 0; t < jobs; ++t)
      workers.emplace_back([&, t] {
        for (int b = t; b < blocks; b += jobs) fill_block(b);
      });
  }
  return out;
}

ScenarioSet sample(const ForecastModel& model, int count, std::uint64_t seed, const SampleOptions& options) {
  ScenarioSet set;
  set.seed = seed;
  set.samples = draw_gaussian_rows(model, count, seed, seed_domain::scheduling, options.jobs);
  if (options.clip_capacity) {
    const Eigen::VectorXd& cap = *options.clip_capacity;
    if (cap.size() != model.dimension()) throw ValidationError("clip capacity length does not match forecast");
    for (int j = 0; j < model.dimension(); ++j)
      set.samples.col(j) = set.samples.col(j).cwiseMax(0.0).cwiseMin(cap(j));
  }
  return set;
}

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& history, std::vector<std::string>* warnings) {
  const auto t = history.rows();
  if (t < 2) throw ValidationError("covariance estimation needs at least 2 rows, got " + std::to_string(t));
  if (history.hasNaN()) throw ValidationError("history contains missing entries; drop incomplete rows first");

  const Eigen::RowVectorXd mean = history.colwise().mean();
  const Eigen::MatrixXd centered = history.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(t - 1);

  if (warnings) {
    for (Eigen::Index j = 0; j < history.cols(); ++j)
      if ((history.col(j).array() == history(0, j)).all())
        warnings->push_back("column " + std::to_string(j) + " is constant; covariance is singular");
  }
  return repair_psd(cov);
}

}  // namespace riskdispatch::scenario
