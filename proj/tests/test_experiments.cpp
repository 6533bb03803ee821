#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles/oracles.hpp"
#include "riskdispatch/dispatch/dispatch.hpp"
#include "riskdispatch/error.hpp"
#include "riskdispatch/experiments/config.hpp"
#include "riskdispatch/experiments/sweeps.hpp"
#include "riskdispatch/experiments/trace.hpp"
#include "riskdispatch/scenario/reserve.hpp"
#include "support.hpp"

using namespace riskdispatch;
using namespace riskdispatch::experiments;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.case_path = testing_support::data_dir() / "ieee30.toml";
  c.alpha_list = {0.1, 0.01, 0.05};
  c.samples = 500;
  c.n_trials = 5000;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("riskdispatch_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesEveryKey) {
  const std::string text = R"(# comment
case = "grid.toml"
wind_buses = [1, 2]
trace = "wind.csv"
trace_normalized = false
synthetic_hours = 100
synthetic_seed = 3
scenario = [1.0, 2.5]
mean_scale = 0.5
alpha = [0.05]
beta = [1.1, 1.2]
samples = 200
trials = 1000
validate_risk = false
seed = 99
clip_to_capacity = true
conventional_scale = 0.7
penetration = 0.3
solver_tol = 1e-8
jobs = 2
output_dir = "out"
)";
  const auto c = parse_experiment_config(text, "/base");
  EXPECT_EQ(c.case_path, fs::path("/base/grid.toml"));
  EXPECT_EQ(c.wind_buses, (std::vector<int>{1, 2}));
  ASSERT_TRUE(c.trace_path);
  EXPECT_EQ(*c.trace_path, fs::path("/base/wind.csv"));
  EXPECT_FALSE(c.trace_normalized);
  EXPECT_EQ(c.synthetic_hours, 100);
  EXPECT_EQ(c.synthetic_seed, 3u);
  EXPECT_EQ(c.scenario_vector, (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(c.mean_scale, 0.5);
  EXPECT_EQ(c.alpha_list, std::vector<double>{0.05});
  EXPECT_EQ(c.beta_list, (std::vector<double>{1.1, 1.2}));
  EXPECT_EQ(c.samples, 200);
  EXPECT_EQ(c.n_trials, 1000);
  EXPECT_FALSE(c.validate_risk);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_TRUE(c.clip_to_capacity);
  EXPECT_EQ(c.conventional_scale, 0.7);
  EXPECT_EQ(c.penetration, 0.3);
  EXPECT_EQ(c.solver_tol, 1e-8);
  EXPECT_EQ(c.jobs, 2);
  EXPECT_EQ(c.output_dir, fs::path("/base/out"));
}

TEST(Config, Errors) {
  try {
    parse_experiment_config("case = \"a.toml\"\n\nbogus = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_experiment_config("alpha = [0.05]\n"), Error);
  EXPECT_THROW(parse_experiment_config("case = \"a\"\nalpha = [1.5]\n"), ValidationError);
  EXPECT_THROW(parse_experiment_config("case = \"a\"\nalpha = []\n"), ValidationError);
  EXPECT_THROW(parse_experiment_config("case = \"a\"\nbeta = [0]\n"), ValidationError);
  EXPECT_THROW(parse_experiment_config("case = \"a\"\nsamples = 0\n"), ValidationError);
  EXPECT_THROW(parse_experiment_config("case = \"a\"\nalpha = 0.05 0.1\n"), ParseError);
  EXPECT_THROW(load_experiment_config("/nonexistent/config.toml"), ParseError);
}

TEST(Trace, CsvRoundTripAndMissingRows) {
  auto t = generate_synthetic_trace(200, 4, 5);
  const auto again = parse_trace_csv(trace_to_csv(t));
  ASSERT_EQ(again.hours(), 200);
  ASSERT_EQ(again.farms(), 4);
  int missing = 0;
  for (int i = 0; i < 200; ++i) {
    bool row_missing = false;
    for (int j = 0; j < 4; ++j) {
      if (std::isnan(t.values(i, j))) {
        EXPECT_TRUE(std::isnan(again.values(i, j)));
        row_missing = true;
      } else {
        EXPECT_NEAR(again.values(i, j), t.values(i, j), 1e-12);
      }
    }
    missing += row_missing;
  }
  EXPECT_EQ(again.timestamps, t.timestamps);
  EXPECT_EQ(drop_incomplete_rows(t), missing);
  EXPECT_EQ(t.hours(), 200 - missing);
  EXPECT_FALSE(t.values.array().isNaN().any());
}

TEST(Trace, SyntheticShape) {
  auto t = generate_synthetic_trace(589, 7, 7, 10.0);
  EXPECT_EQ(t.timestamps.front(), "2012-05-01T00:00");
  EXPECT_EQ(t.timestamps[24], "2012-05-02T00:00");
  drop_incomplete_rows(t);
  EXPECT_GE(t.values.minCoeff(), 0.0);
  EXPECT_LE(t.values.maxCoeff(), 10.0);
  const auto cov = scenario::estimate_covariance(t.values);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  EXPECT_GT(cov(0, 1), 0.0);  // correlated, not diagonal
  EXPECT_EQ(generate_synthetic_trace(50, 3, 1).values.array().isNaN().count(),
            generate_synthetic_trace(50, 3, 1).values.array().isNaN().count());
  EXPECT_THROW(generate_synthetic_trace(1, 3, 1), ValidationError);
}

TEST(Trace, ParseErrorsCarryLine) {
  try {
    parse_trace_csv("timestamp,farm1\n2012-05-01T00:00,0.5\n2012-05-01T01:00,abc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_trace_csv("timestamp,farm1\n2012-05-01T00:00,0.5,0.2\n"), ParseError);
}

TEST(Scenario, MeansAndTraceHour) {
  WindTrace tr;
  tr.values = Eigen::MatrixXd::Ones(3, 7);
  tr.values.row(1) *= 2.0;
  tr.timestamps = {"a", "b", "c"};
  EXPECT_EQ(scenario_mean("high-wind", tr)(2), 7.66);
  EXPECT_EQ(scenario_mean("low-wind", tr)(6), 0.0);
  EXPECT_EQ(scenario_mean("trace-hour:1", tr), Eigen::VectorXd::Constant(7, 2.0));
  EXPECT_EQ(scenario_mean("1,2,3", tr), Eigen::Vector3d(1, 2, 3));
  EXPECT_THROW(scenario_mean("trace-hour:3", tr), ValidationError);
  EXPECT_THROW(scenario_mean("medium-wind", tr), ValidationError);
}

TEST(Scenario, MakeScenarioScalesMean) {
  auto c = small_config();
  c.mean_scale = 0.5;
  auto tr = generate_synthetic_trace(100, 7, 3, 9.0);
  drop_incomplete_rows(tr);
  const auto f = make_scenario(c, tr);
  EXPECT_NEAR(f.mean()(0), 3.0, 1e-15);
  EXPECT_LE((f.covariance() - oracle::two_pass_covariance(tr.values)).cwiseAbs().maxCoeff(), 1e-10);
  WindTrace one = tr;
  one.values = tr.values.topRows(1);
  EXPECT_THROW(make_scenario(c, one), ValidationError);
  c.scenario_vector = {1.0, 2.0};
  EXPECT_THROW(make_scenario(c, tr), ValidationError);
}

TEST(Sweep, PreparedSetup) {
  const auto s = prepare_experiment(small_config());
  EXPECT_NEAR(s.grid.wind_capacity_mw(), 67.0, 1e-9);
  EXPECT_EQ(s.scenarios.count(), 500);
  EXPECT_EQ(s.scenarios.dimension(), 7);
  EXPECT_EQ(s.trace_mw.hours() + s.dropped_trace_rows, 589);
}

TEST(Sweep, AlphaSweepSortedAndMonotone) {
  const auto c = small_config();
  const auto setup = prepare_experiment(c);
  const auto rows = run_alpha_sweep(c, setup);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].alpha, 0.01);
  EXPECT_EQ(rows[2].alpha, 0.1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i].solution.objective, rows[i - 1].solution.objective + 1e-7);
    for (int f = 0; f < 7; ++f) EXPECT_GE(rows[i].reserve.z_res(f), rows[i - 1].reserve.z_res(f));
  }
  for (const auto& r : rows) {
    ASSERT_TRUE(r.risk);
    EXPECT_EQ(r.risk->n_trials, 5000);
    EXPECT_EQ(r.reserve.method, scenario::ReserveMethod::order_statistic);
  }
}

TEST(Sweep, SingleAlphaMatchesDirectSolve) {
  auto c = small_config();
  c.alpha_list = {0.05};
  c.validate_risk = false;
  const auto setup = prepare_experiment(c);
  const auto rows = run_alpha_sweep(c, setup);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].risk);
  const auto reserve = scenario::reserve_order_statistic(setup.scenarios, 0.05);
  qp::SolverOptions opts;
  opts.tol = c.solver_tol;
  const auto direct =
      dispatch::solve_dispatch(dispatch::DispatchProblem::create(setup.grid, setup.model, reserve), opts);
  EXPECT_EQ(rows[0].reserve.z_res, reserve.z_res);
  EXPECT_NEAR(rows[0].solution.objective, direct.objective, 1e-12);
}

TEST(Sweep, BetaOneMatchesAlphaSweep) {
  auto c = small_config();
  c.beta_list = {1.0, 1.2};
  c.validate_risk = false;
  const auto setup = prepare_experiment(c);
  const auto rows = run_alpha_sweep(c, setup);
  const auto cells = run_beta_sweep(c, setup);
  ASSERT_EQ(cells.size(), 6u);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const auto& cell = cells[2 * a];
    EXPECT_EQ(cell.beta, 1.0);
    EXPECT_EQ(cell.alpha, rows[a].alpha);
    ASSERT_EQ(cell.status, CellStatus::optimal);
    EXPECT_NEAR(cell.solution->objective, rows[a].solution.objective, 1e-9);
    EXPECT_GT(cells[2 * a + 1].solution->objective, cell.solution->objective);
  }
}

TEST(Sweep, OverloadedCellsRecorded) {
  auto c = small_config();
  c.alpha_list = {0.05};
  c.beta_list = {1.1, 3.0};
  c.validate_risk = false;
  const auto setup = prepare_experiment(c);
  const auto cells = run_beta_sweep(c, setup);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].status, CellStatus::optimal);
  EXPECT_EQ(cells[1].status, CellStatus::infeasible);
  EXPECT_NE(cells[1].diagnosis.find("inadequate supply"), std::string::npos);
  EXPECT_FALSE(cells[1].solution);
  const auto csv = beta_sweep_csv(cells);
  EXPECT_NE(csv.find("infeasible"), std::string::npos);
}

TEST(Sweep, OutputsIndependentOfJobs) {
  auto c = small_config();
  c.beta_list = {1.05, 1.3};
  std::vector<std::string> outputs;
  for (int jobs : {1, 3}) {
    c.jobs = jobs;
    c.output_dir = scratch_dir("jobs" + std::to_string(jobs));
    const auto setup = prepare_experiment(c);
    const auto paths = write_outputs(c, setup, run_alpha_sweep(c, setup), run_beta_sweep(c, setup));
    ASSERT_EQ(paths.size(), 4u);
    std::string all;
    for (const auto& p : paths) all += p.filename().string() + "\n" + slurp(p);
    outputs.push_back(all);
    fs::remove_all(c.output_dir);
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_NE(outputs[0].find("alpha,objective,lmp_min"), std::string::npos);
}

TEST(Sweep, LmpSummary) {
  const auto s = summarize_lmp(Eigen::Vector3d(1.0, 2.0, 6.0));
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.mean, 3.0);
  EXPECT_EQ(s.max, 6.0);
}
