#include <benchmark/benchmark.h>

#include <random>

#include "riskdispatch/dispatch/dispatch.hpp"
#include "riskdispatch/experiments/sweeps.hpp"
#include "riskdispatch/grid/case_io.hpp"
#include "riskdispatch/grid/dc_model.hpp"
#include "riskdispatch/qp/solver.hpp"
#include "riskdispatch/risk/validator.hpp"
#include "riskdispatch/scenario/forecast.hpp"
#include "riskdispatch/scenario/reserve.hpp"

using namespace riskdispatch;

namespace {

grid::GridCase ieee30() {
  static const grid::GridCase g =
      grid::scale_for_penetration(grid::load_case_file(RISKDISPATCH_DATA_DIR "/ieee30.toml"), 0.8, 0.2);
  return g;
}

scenario::ForecastModel seven_farm_model() {
  Eigen::MatrixXd c(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) c(i, j) = 2.0 * (0.4 + 0.6 * std::exp(-std::abs(i - j) / 2.0));
  return scenario::ForecastModel::create(
      Eigen::Map<const Eigen::VectorXd>(experiments::kHighWindMean.data(), 7), c);
}

void BM_DcModel(benchmark::State& state) {
  const auto g = ieee30();
  for (auto _ : state) benchmark::DoNotOptimize(grid::build_dc_model(g));
}
BENCHMARK(BM_DcModel);

void BM_RandomBoxQp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  auto qp = qp::QuadProgram::with_variables(n);
  qp.Q = m.transpose() * m;
  for (int j = 0; j < n; ++j) qp.c(j) = 3.0 * normal(rng);
  qp.A_in.resize(2 * n, n);
  qp.A_in << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  qp.b_in = Eigen::VectorXd::Ones(2 * n);
  for (auto _ : state) benchmark::DoNotOptimize(qp::solve(qp));
}
BENCHMARK(BM_RandomBoxQp)->Arg(10)->Arg(30)->Arg(100);

void BM_DispatchIeee30(benchmark::State& state) {
  const auto g = ieee30();
  scenario::ReserveVector r;
  r.z_res = Eigen::Map<const Eigen::VectorXd>(experiments::kHighWindMean.data(), 7);
  const auto problem = dispatch::DispatchProblem::create(g, grid::build_dc_model(g), r);
  for (auto _ : state) benchmark::DoNotOptimize(dispatch::solve_dispatch(problem));
}
BENCHMARK(BM_DispatchIeee30);

void BM_Sample(benchmark::State& state) {
  const auto model = seven_farm_model();
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scenario::sample(model, count, 2013));
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_Sample)->Arg(1000)->Arg(100000);

void BM_OrderStatistic(benchmark::State& state) {
  const auto set = scenario::sample(seven_farm_model(), static_cast<int>(state.range(0)), 2013);
  for (auto _ : state) benchmark::DoNotOptimize(scenario::reserve_order_statistic(set, 0.05));
}
BENCHMARK(BM_OrderStatistic)->Arg(1000)->Arg(100000);

void BM_Validate(benchmark::State& state) {
  const auto model = seven_farm_model();
  const Eigen::VectorXd w = model.mean().array() - 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(risk::validate(w, model, 100000, 2013, 0.05));
}
BENCHMARK(BM_Validate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
