#pragma once

#include "riskdispatch/qp/program.hpp"

namespace riskdispatch::qp {

/// Residuals of the optimality conditions under the sign convention
/// Qx + c + A_eq' nu + A_in' lambda = 0, lambda >= 0. Computed from the
/// program data alone, independent of any solver state.
KktResiduals evaluate_kkt(const QuadProgram& qp, const Eigen::VectorXd& x, const Eigen::VectorXd& nu,
                          const Eigen::VectorXd& lambda);

/// The acceptance test for an optimal point: stationarity <= tol (1 + ||c||_inf),
/// primal residuals <= tol, complementarity <= tol * max(q, 1).
bool kkt_satisfied(const QuadProgram& qp, const KktResiduals& r, double tol);

}  // namespace riskdispatch::qp
