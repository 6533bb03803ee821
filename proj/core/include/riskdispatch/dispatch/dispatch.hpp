#pragma once

#include <vector>

#include <Eigen/Dense>

#include "riskdispatch/grid/case.hpp"
#include "riskdispatch/grid/dc_model.hpp"
#include "riskdispatch/qp/program.hpp"
#include "riskdispatch/qp/solver.hpp"
#include "riskdispatch/scenario/reserve.hpp"

namespace riskdispatch::dispatch {

/// Column layout of the assembled program: [p_G | w | theta].
struct VariableLayout {
  int generators = 0;
  int farms = 0;
  int buses = 0;

  int p(int g) const { return g; }
  int w(int f) const { return generators + f; }
  int theta(int m) const { return generators + farms + m; }
  int size() const { return generators + farms + buses; }
};

/// Row layout. Equalities: one balance row per bus in internal bus order (the
/// LMP contract), then the reference-angle row. Inequalities: +H theta <= f,
/// -H theta <= f, p <= p_max, -p <= -p_min, w <= z_res, -w <= 0.
struct RowLayout {
  int buses = 0;
  int lines = 0;
  int generators = 0;
  int farms = 0;

  int balance(int m) const { return m; }
  int reference() const { return buses; }
  int equalities() const { return buses + 1; }

  int flow_upper(int l) const { return l; }
  int flow_lower(int l) const { return lines + l; }
  int p_max(int g) const { return 2 * lines + g; }
  int p_min(int g) const { return 2 * lines + generators + g; }
  int w_max(int f) const { return 2 * lines + 2 * generators + f; }
  int w_min(int f) const { return 2 * lines + 2 * generators + farms + f; }
  int inequalities() const { return 2 * lines + 2 * generators + 2 * farms; }
};

/// The deterministic dispatch problem: quadratic generation cost, per-bus DC
/// balance, line limits, generator limits, theta_ref = 0, and 0 <= w <= z_res.
/// z_res entry f belongs to grid.wind_farms[f].
struct DispatchProblem {
  grid::GridCase grid;
  grid::DcModel model;
  scenario::ReserveVector reserve;

  /// Checks dimensions and reserve/farm alignment.
  static DispatchProblem create(grid::GridCase grid, grid::DcModel model, scenario::ReserveVector reserve);

  VariableLayout variables() const;
  RowLayout rows() const;
};

/// Program in MW units: balance rows read sum p + sum w - base_mva (B theta)_m = p_D,m.
qp::QuadProgram assemble(const grid::GridCase& grid, const grid::DcModel& model,
                         const scenario::ReserveVector& reserve);

struct DispatchSolution {
  Eigen::VectorXd p_g;    // MW per generator
  Eigen::VectorXd w;      // MW per wind farm
  Eigen::VectorXd theta;  // rad per bus, theta[ref] == 0
  Eigen::VectorXd flows;  // MW per line, from -> to
  double objective = 0.0; // $/h, includes c0 terms
  Eigen::VectorXd lmp;    // $/MWh per bus
  /// Per line: column 0 the dual of flow <= limit, column 1 of -flow <= limit ($/MWh).
  Eigen::MatrixXd flow_duals;
  std::vector<int> binding_lines;  // lines whose flow dual exceeds kBindingDual
  /// ||p_G + w - p_D - B theta||_inf in per-unit.
  double balance_residual_pu = 0.0;
  qp::QpSolution solver;
};

inline constexpr double kBindingDual = 1e-6;

/// Throws InfeasibleError with a diagnosis (inadequate supply, excess minimum
/// generation, or transmission-limited) and SolverError when the solver stops
/// without a certificate.
DispatchSolution solve_dispatch(const DispatchProblem& problem, const qp::SolverOptions& options = {});

struct Curtailment {
  Eigen::VectorXd spilled;     // max(0, actual - w)
  std::vector<bool> shortfall; // actual < w
};

Curtailment curtailment(const Eigen::VectorXd& actual, const Eigen::VectorXd& w);

}  // namespace riskdispatch::dispatch
