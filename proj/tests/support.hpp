#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "riskdispatch/grid/case.hpp"
#include "riskdispatch/grid/case_io.hpp"
#include "riskdispatch/qp/program.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return RISKDISPATCH_DATA_DIR; }

inline riskdispatch::grid::GridCase ieee30() { return riskdispatch::grid::load_case_file(data_dir() / "ieee30.toml"); }

// Gen at bus 1 (0.01 p^2 + 10 p, 0..100 MW), 50 MW load at bus 2, one line.
inline const char* kTwoBus = R"(
base_mva = 100

[[bus]]
id = 1
load_mw = 0

[[bus]]
id = 2
load_mw = 50

[[branch]]
from_bus = 1
to_bus = 2
reactance = 0.1
flow_limit_mw = 100

[[generator]]
bus = 1
p_min_mw = 0
p_max_mw = 100
cost_c2 = 0.01
cost_c1 = 10
cost_c0 = 0
)";

inline riskdispatch::grid::GridCase two_bus(double limit = 100.0) {
  auto g = riskdispatch::grid::parse_case(kTwoBus);
  g.branches[0].flow_limit_mw = limit;
  return g;
}

// Triangle, gens at buses 1 and 2, farm at bus 3, load split between 2 and 3.
inline riskdispatch::grid::GridCase three_bus(double limit_13 = 40.0) {
  using namespace riskdispatch::grid;
  GridCase g;
  g.buses = {Bus{1, 0.0, false}, Bus{2, 60.0, false}, Bus{3, 70.0, true}};
  g.branches = {Branch{0, 1, 0.1, 100.0}, Branch{0, 2, 0.2, limit_13}, Branch{1, 2, 0.25, 100.0}};
  g.generators = {Generator{0, 0.0, 150.0, 0.02, 8.0, 5.0}, Generator{1, 10.0, 120.0, 0.05, 12.0, 0.0}};
  g.wind_farms = {WindFarm{2, 30.0}};
  validate(g);
  return g;
}

// Random convex QP: Q = M'M with M of random rank, box [lo, hi], and an
// optional single equality a'x = b through a strictly interior point.
struct RandomBoxQp {
  riskdispatch::qp::QuadProgram program;
  Eigen::VectorXd lo, hi;
  bool has_equality = false;
  Eigen::VectorXd a;
  double b = 0.0;
};

inline RandomBoxQp random_box_qp(std::mt19937_64& rng, int n, bool with_equality) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> rank_dist(1, n);
  const int rank = rank_dist(rng);
  Eigen::MatrixXd m(rank, n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  RandomBoxQp out;
  out.lo.resize(n);
  out.hi.resize(n);
  for (int j = 0; j < n; ++j) {
    out.lo(j) = -0.5 - 1.5 * unit(rng);
    out.hi(j) = 0.5 + 1.5 * unit(rng);
  }
  auto& qp = out.program;
  qp = riskdispatch::qp::QuadProgram::with_variables(n);
  qp.Q = m.transpose() * m;
  qp.Q = 0.5 * (qp.Q + qp.Q.transpose());
  qp.c.resize(n);
  for (int j = 0; j < n; ++j) qp.c(j) = 3.0 * normal(rng);
  qp.c0 = normal(rng);
  qp.A_in.resize(2 * n, n);
  qp.A_in << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  qp.b_in.resize(2 * n);
  qp.b_in << out.hi, -out.lo;
  if (with_equality) {
    out.has_equality = true;
    out.a.resize(n);
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) {
      out.a(j) = normal(rng);
      if (std::abs(out.a(j)) < 0.1) out.a(j) = 0.1;
      x0(j) = out.lo(j) + (0.2 + 0.6 * unit(rng)) * (out.hi(j) - out.lo(j));
    }
    out.b = out.a.dot(x0);
    qp.A_eq = out.a.transpose();
    qp.b_eq = Eigen::VectorXd::Constant(1, out.b);
  }
  return out;
}

}  // namespace testing_support
