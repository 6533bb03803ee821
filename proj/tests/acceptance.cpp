// Acceptance checks, one line per criterion. Exit status is non-zero when any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles/oracles.hpp"
#include "riskdispatch/dispatch/dispatch.hpp"
#include "riskdispatch/error.hpp"
#include "riskdispatch/experiments/config.hpp"
#include "riskdispatch/experiments/sweeps.hpp"
#include "riskdispatch/grid/dc_model.hpp"
#include "riskdispatch/qp/kkt.hpp"
#include "riskdispatch/qp/solver.hpp"
#include "riskdispatch/risk/validator.hpp"
#include "riskdispatch/scenario/forecast.hpp"
#include "riskdispatch/scenario/reserve.hpp"
#include "support.hpp"

using namespace riskdispatch;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

experiments::ExperimentConfig sweep_config() {
  return experiments::load_experiment_config(testing_support::data_dir() / "sweep_ieee30.toml");
}

scenario::ReserveVector plain_reserve(Eigen::VectorXd z) {
  scenario::ReserveVector r;
  r.z_res = std::move(z);
  return r;
}

dispatch::DispatchSolution solve(const grid::GridCase& g, const scenario::ReserveVector& r, double tol = 1e-9) {
  qp::SolverOptions opts;
  opts.tol = tol;
  return dispatch::solve_dispatch(dispatch::DispatchProblem::create(g, grid::build_dc_model(g), r), opts);
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto g = testing_support::ieee30();
  const auto m = grid::build_dc_model(g);
  const auto& b = m.admittance;
  const double sym = (b - b.transpose()).cwiseAbs().maxCoeff();
  const double row_sum = (b * Eigen::VectorXd::Ones(b.cols())).lpNorm<Eigen::Infinity>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > 1e-9 * s(0);
  const double elapsed = seconds_since(t0);
  const bool pass = b.rows() == 30 && b.cols() == 30 && sym == 0.0 && rank == 29 && row_sum <= 1e-12 &&
                    m.flow_matrix.rows() == 41 && m.flow_matrix.cols() == 30 && elapsed < 1.0;
  return {pass, "B " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ", asymmetry " + fmt(sym) +
                    ", rank " + std::to_string(rank) + ", |B*1|inf " + fmt(row_sum) + ", H " +
                    std::to_string(m.flow_matrix.rows()) + "x" + std::to_string(m.flow_matrix.cols()) + ", " +
                    fmt(elapsed, 3) + " s"};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2013);
  std::uniform_int_distribution<int> n_dist(2, 30);
  double worst_rel = 0.0, worst_kkt = 0.0;
  int non_optimal = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = testing_support::random_box_qp(rng, n_dist(rng), trial % 2 == 1);
    const auto sol = qp::solve(r.program, 1e-10, 200);
    if (sol.status != qp::QpStatus::optimal) {
      ++non_optimal;
      continue;
    }
    oracle::BoxQp box{r.program.Q, r.program.c, r.lo, r.hi, std::nullopt, 0.0};
    if (r.has_equality) {
      box.a = r.a;
      box.b = r.b;
    }
    const auto ref = oracle::projected_gradient(box);
    const double ref_obj = ref.objective + r.program.c0;
    worst_rel = std::max(worst_rel, std::abs(sol.objective - ref_obj) / std::max(1.0, std::abs(ref_obj)));
    const auto k = qp::evaluate_kkt(r.program, sol.x, sol.nu, sol.lambda);
    worst_kkt = std::max({worst_kkt, k.primal_eq, k.primal_in, k.dual, k.complementarity});
  }
  const double elapsed = seconds_since(t0);
  const bool pass = non_optimal == 0 && worst_rel <= 1e-6 && worst_kkt <= 1e-8 && elapsed < 30.0;
  return {pass, "50 QPs, non-optimal " + std::to_string(non_optimal) + ", max relative objective gap " +
                    fmt(worst_rel) + ", max KKT residual " + fmt(worst_kkt) + ", " + fmt(elapsed, 3) + " s"};
}

Outcome criterion3() {
  const double step = 0.01;
  double worst_excess = 0.0;  // objective gap beyond the lattice bound
  bool solver_worse = false;
  auto check = [&](const grid::GridCase& g, double z) {
    const auto s = solve(g, plain_reserve(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.wind_farms.size()), z)));
    const auto ref = oracle::grid_search_dispatch(g, {z}, step);
    if (!ref.feasible) {
      solver_worse = true;
      return;
    }
    // Moving the optimum onto the lattice costs at most one step per free
    // injection times the largest marginal cost.
    double mc = 0.0;
    for (const auto& gen : g.generators) mc = std::max(mc, std::abs(gen.marginal_cost(gen.p_max_mw)));
    const double bound = 2.0 * step * mc * static_cast<double>(g.generators.size() + g.wind_farms.size());
    if (s.objective > ref.objective + 1e-6) solver_worse = true;
    worst_excess = std::max(worst_excess, (ref.objective - s.objective) - bound);
  };
  const auto two = grid::add_wind_farms(testing_support::two_bus(), {2}, 20.0);
  for (double z : {0.0, 7.3, 20.0}) check(two, z);
  for (double limit : {35.0, 40.0, 100.0})
    for (double z : {0.0, 12.5, 30.0}) check(testing_support::three_bus(limit), z);

  const auto lmp_case = solve(testing_support::two_bus(), plain_reserve(Eigen::VectorXd(0)));
  const double lmp_err = std::max(std::abs(lmp_case.lmp(0) - 11.0), std::abs(lmp_case.lmp(1) - 11.0));
  const bool pass = !solver_worse && worst_excess <= 0.0 && lmp_err <= 1e-8;
  return {pass, "12 small cases, solver never above search: " + std::string(solver_worse ? "no" : "yes") +
                    ", excess over lattice bound " + fmt(std::max(0.0, worst_excess)) + ", 2-bus LMP error " +
                    fmt(lmp_err)};
}

Outcome criterion4() {
  auto config = sweep_config();
  config.alpha_list = {0.05};
  config.validate_risk = false;
  const auto high_setup = experiments::prepare_experiment(config);
  const auto high = experiments::run_alpha_sweep(config, high_setup).at(0).solution;
  config.scenario = "low-wind";
  const auto low_setup = experiments::prepare_experiment(config);
  const auto low = experiments::run_alpha_sweep(config, low_setup).at(0).solution;
  const double spread = high.lmp.maxCoeff() - high.lmp.minCoeff();
  const bool pass = high.binding_lines.empty() && high.lmp.size() == 30 && spread <= 1e-4 &&
                    low.objective > high.objective;
  return {pass, "high-wind binding lines " + std::to_string(high.binding_lines.size()) + ", LMP spread " +
                    fmt(spread) + " $/MWh, objective low " + fmt(low.objective, 8) + " > high " +
                    fmt(high.objective, 8)};
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  auto config = sweep_config();
  config.beta_list.clear();
  bool all = true;
  std::string worst;
  double worst_margin = -1.0;
  Eigen::VectorXd worst_farms;
  for (std::uint64_t seed : {2013u, 2014u, 2015u, 2016u, 2017u}) {
    config.seed = seed;
    const auto setup = experiments::prepare_experiment(config);
    for (const auto& row : experiments::run_alpha_sweep(config, setup)) {
      const auto& r = *row.risk;
      const double margin = r.empirical_risk - (row.alpha + r.ci_halfwidth);
      if (margin > 0.0) all = false;
      if (margin > worst_margin) {
        worst_margin = margin;
        worst = "seed " + std::to_string(seed) + " alpha " + fmt(row.alpha) + ": risk " + fmt(r.empirical_risk) +
                " ci " + fmt(r.ci_halfwidth);
        worst_farms = r.per_farm_violation_rates;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  std::string farms;
  for (Eigen::Index f = 0; f < worst_farms.size(); ++f) farms += (f ? " " : "") + fmt(worst_farms(f), 4);
  return {all && elapsed < 120.0, "20 runs, worst " + worst + ", per-farm rates [" + farms + "], " +
                                      fmt(elapsed, 3) + " s"};
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  auto config = sweep_config();
  config.validate_risk = false;
  const auto setup = experiments::prepare_experiment(config);
  const auto cells = experiments::run_beta_sweep(config, setup);
  const auto na = config.alpha_list.size(), nb = config.beta_list.size();
  bool ok = cells.size() == na * nb;
  double worst = -std::numeric_limits<double>::infinity();
  auto cost = [&](std::size_t a, std::size_t b) {
    const auto& cell = cells[a * nb + b];
    if (cell.status != experiments::CellStatus::optimal) ok = false;
    return cell.solution ? cell.solution->objective : std::nan("");
  };
  for (std::size_t a = 0; ok && a < na; ++a)
    for (std::size_t b = 0; ok && b < nb; ++b) {
      if (a + 1 < na) worst = std::max(worst, cost(a + 1, b) - cost(a, b));  // non-increasing in alpha
      if (b + 1 < nb) worst = std::max(worst, cost(a, b) - cost(a, b + 1));  // non-decreasing in beta
    }
  const double elapsed = seconds_since(t0);
  const bool pass = ok && worst <= 1e-7 && elapsed < 60.0;
  return {pass, std::to_string(na) + "x" + std::to_string(nb) + " grid, all optimal: " + (ok ? "yes" : "no") +
                    ", worst monotonicity violation " + fmt(std::max(0.0, worst)) + ", " + fmt(elapsed, 3) + " s"};
}

Outcome criterion7() {
  auto config = sweep_config();
  config.alpha_list = {0.05};
  config.beta_list.clear();
  for (int i = 0; i <= 6; ++i) config.beta_list.push_back(1.2 + 0.05 * i);
  config.validate_risk = false;
  const auto setup = experiments::prepare_experiment(config);
  const auto cells = experiments::run_beta_sweep(config, setup);
  for (const auto& cell : cells) {
    if (!cell.solution) continue;
    const auto& s = *cell.solution;
    const double max_dual = s.flow_duals.size() ? s.flow_duals.maxCoeff() : 0.0;
    const double spread = s.lmp.maxCoeff() - s.lmp.minCoeff();
    if (max_dual > 1e-4 && spread > 1e-4) {
      std::string lines;
      for (int l : s.binding_lines) lines += (lines.empty() ? "" : ",") + std::to_string(l + 1);
      return {true, "alpha 0.05, beta " + fmt(cell.beta) + ": max flow dual " + fmt(max_dual) + ", binding lines " +
                        lines + ", LMP range " + fmt(s.lmp.minCoeff()) + ".." + fmt(s.lmp.maxCoeff())};
    }
  }
  return {false, "no congestion found for beta in [1.2, 1.5] at alpha 0.05"};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> s_dist(1, 500), w_dist(1, 10);
  std::uniform_real_distribution<double> a_dist(0.001, 0.5);
  std::normal_distribution<double> normal(2.0, 3.0);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int s = s_dist(rng), w = w_dist(rng);
    const double alpha = a_dist(rng);
    scenario::ScenarioSet set;
    set.samples.resize(s, w);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < w; ++j) set.samples(i, j) = normal(rng);
    const auto r = scenario::reserve_order_statistic(set, alpha);
    for (int j = 0; j < w; ++j) {
      std::vector<double> col(set.samples.col(j).data(), set.samples.col(j).data() + s);
      if (r.z_res(j) != oracle::sorted_order_statistic(col, alpha)) ++mismatches;
    }
  }
  return {mismatches == 0, "1000 scenario sets, mismatching entries " + std::to_string(mismatches)};
}

Outcome criterion9() {
  Eigen::MatrixXd c(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) c(i, j) = (1.0 + 0.3 * i) * (1.0 + 0.3 * j) * (0.2 + 0.8 * std::exp(-std::abs(i - j) / 2.0));
  const auto model = scenario::ForecastModel::create(Eigen::VectorXd::LinSpaced(7, 1.0, 7.0), c);
  const int n = 100000;
  const auto draws = scenario::sample(model, n, 2013);
  const Eigen::MatrixXd est = oracle::two_pass_covariance(draws.samples);
  double worst = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      // Standard error of a Gaussian sample covariance entry.
      const double se = std::sqrt((c(i, i) * c(j, j) + c(i, j) * c(i, j)) / (n - 1));
      worst = std::max(worst, std::abs(est(i, j) - c(i, j)) / se);
    }
  return {worst <= 5.0, "10^5 draws, worst entry error " + fmt(worst, 4) + " standard errors"};
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10() {
  const fs::path work = fs::temp_directory_path() / "riskdispatch_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  std::ifstream in(testing_support::data_dir() / "sweep_ieee30.toml");
  std::ofstream cfg(work / "sweep.toml");
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("case", 0) == 0) line = "case = \"" + (testing_support::data_dir() / "ieee30.toml").string() + "\"";
    if (line.rfind("output_dir", 0) == 0) line = "output_dir = \"out\"";
    cfg << line << '\n';
  }
  cfg.close();

  std::vector<std::vector<std::pair<std::string, std::string>>> runs;
  for (int r = 0; r < 2; ++r) {
    fs::remove_all(work / "out");
    const std::string cmd = std::string("\"") + DISPATCH_EXE + "\" sweep --config \"" + (work / "sweep.toml").string() +
                            "\" >/dev/null 2>&1";
    if (const int code = run_command(cmd); code != 0) return {false, "dispatch sweep exited with " + std::to_string(code)};
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& e : fs::directory_iterator(work / "out")) files.emplace_back(e.path().filename(), slurp(e.path()));
    std::sort(files.begin(), files.end());
    runs.push_back(std::move(files));
  }
  fs::remove_all(work);
  const bool same = runs[0] == runs[1] && !runs[0].empty();
  std::size_t bytes = 0;
  for (const auto& f : runs[0]) bytes += f.second.size();
  return {same, std::to_string(runs[0].size()) + " files, " + std::to_string(bytes) + " bytes, identical: " +
                    (same ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"matrix construction", criterion1},     {"QP solver vs projected gradient", criterion2},
      {"dispatch vs grid search", criterion3}, {"uncongested high wind, low > high cost", criterion4},
      {"out-of-sample risk <= alpha", criterion5}, {"cost monotone in alpha and beta", criterion6},
      {"congestion emerges with load", criterion7}, {"order statistic vs full sort", criterion8},
      {"sampler covariance", criterion9},      {"sweep determinism", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
