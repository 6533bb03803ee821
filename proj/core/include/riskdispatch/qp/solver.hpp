#pragma once

#include "riskdispatch/qp/program.hpp"

namespace riskdispatch::qp {

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 100;
  /// Static diagonal regularization of the KKT matrix: +delta on the primal
  /// block, -delta on the equality block. Keeps the system quasi-definite when
  /// Q has zero curvature directions (linear costs, angle variables).
  double regularization = 1e-10;
  bool presolve = true;
};

/// Dense primal-dual interior point method with Mehrotra predictor-corrector
/// steps. Duals follow Qx + c + A_eq' nu + A_in' lambda = 0 with lambda >= 0.
/// Never throws for infeasible/unbounded programs; those come back as a
/// status. Throws ValidationError when the program itself is malformed.
QpSolution solve(const QuadProgram& qp, const SolverOptions& options = {});

inline QpSolution solve(const QuadProgram& qp, double tol, int max_iter) {
  SolverOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return solve(qp, options);
}

}  // namespace riskdispatch::qp
