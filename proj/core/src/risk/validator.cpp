#include "riskdispatch/risk/validator.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "riskdispatch/error.hpp"
#include "riskdispatch/random.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace riskdispatch::risk {

RiskReport evaluate_risk(const Eigen::VectorXd& w, const Eigen::MatrixXd& trials, double alpha_target) {
  if (trials.cols() != w.size())
    throw ValidationError("risk evaluation: schedule has " + std::to_string(w.size()) + " farms, trials have " +
                          std::to_string(trials.cols()));
  if (trials.rows() < 1) throw ValidationError("risk evaluation needs at least one trial");
  if (!(alpha_target > 0.0 && alpha_target < 1.0)) throw ValidationError("alpha must lie in (0,1)");

  RiskReport report;
  report.n_trials = static_cast<long>(trials.rows());
  report.alpha_target = alpha_target;
  Eigen::VectorXd farm_violations = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index t = 0; t < trials.rows(); ++t) {
    bool violated = false;
    for (Eigen::Index m = 0; m < w.size(); ++m) {
      if (trials(t, m) < w(m)) {
        farm_violations(m) += 1.0;
        violated = true;
      }
    }
    if (violated) ++report.violations;
  }
  const double n = static_cast<double>(report.n_trials);
  report.empirical_risk = static_cast<double>(report.violations) / n;
  report.ci_halfwidth = 1.96 * std::sqrt(report.empirical_risk * (1.0 - report.empirical_risk) / n);
  report.per_farm_violation_rates = farm_violations / n;
  report.pass = report.empirical_risk + report.ci_halfwidth <= alpha_target;
  return report;
}

RiskReport validate(const Eigen::VectorXd& w, const scenario::ForecastModel& model, long n_trials, std::uint64_t seed,
                    double alpha_target, int jobs) {
  if (n_trials < 1) throw ValidationError("n_trials must be at least 1");
  if (n_trials > std::numeric_limits<int>::max()) throw ValidationError("n_trials too large");
  if (w.size() != model.dimension())
    throw ValidationError("schedule has " + std::to_string(w.size()) + " farms, forecast model has " +
                          std::to_string(model.dimension()));
  const Eigen::MatrixXd trials =
      scenario::draw_gaussian_rows(model, static_cast<int>(n_trials), seed, seed_domain::validation, jobs);
  return evaluate_risk(w, trials, alpha_target);
}

std::string to_json(const RiskReport& r) {
  nlohmann::ordered_json doc;
  doc["empirical_risk"] = r.empirical_risk;
  doc["violations"] = r.violations;
  doc["n_trials"] = r.n_trials;
  doc["alpha_target"] = r.alpha_target;
  doc["ci_halfwidth"] = r.ci_halfwidth;
  doc["per_farm_violation_rates"] = std::vector<double>(
      r.per_farm_violation_rates.data(), r.per_farm_violation_rates.data() + r.per_farm_violation_rates.size());
  doc["pass"] = r.pass;
  return doc.dump(2) + "\n";
}

std::string csv_header() { return "alpha_target,n_trials,violations,empirical_risk,ci_halfwidth,pass"; }

std::string to_csv_row(const RiskReport& r) {
  using toml::format_number;
  return format_number(r.alpha_target) + ',' + std::to_string(r.n_trials) + ',' + std::to_string(r.violations) + ',' +
         format_number(r.empirical_risk) + ',' + format_number(r.ci_halfwidth) + ',' + (r.pass ? "1" : "0");
}

}  // namespace riskdispatch::risk
