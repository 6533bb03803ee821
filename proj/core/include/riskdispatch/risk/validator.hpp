#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "riskdispatch/scenario/forecast.hpp"

namespace riskdispatch::risk {

inline constexpr long kDefaultTrials = 100000;

/// Monte Carlo estimate of Prob(z >= w fails in at least one farm).
struct RiskReport {
  double empirical_risk = 0.0;  // violations / n_trials
  long violations = 0;
  long n_trials = 0;
  double alpha_target = 0.0;
  double ci_halfwidth = 0.0;  // 1.96 sqrt(r (1 - r) / n)
  Eigen::VectorXd per_farm_violation_rates;
  bool pass = false;  // empirical_risk + ci_halfwidth <= alpha_target
};

/// Paired evaluation on given trial rows (n_trials x W).
RiskReport evaluate_risk(const Eigen::VectorXd& w, const Eigen::MatrixXd& trials, double alpha_target);

/// Draws n_trials fresh forecasts from the validation seed domain, which is
/// disjoint from the scheduling samples drawn with the same seed.
RiskReport validate(const Eigen::VectorXd& w, const scenario::ForecastModel& model, long n_trials, std::uint64_t seed,
                    double alpha_target, int jobs = 1);

std::string to_json(const RiskReport& report);
std::string csv_header();
std::string to_csv_row(const RiskReport& report);

}  // namespace riskdispatch::risk
