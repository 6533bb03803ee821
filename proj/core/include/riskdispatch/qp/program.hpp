#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace riskdispatch::qp {

/// minimize 0.5 x'Qx + c'x + c0  subject to  A_eq x = b_eq,  A_in x <= b_in.
struct QuadProgram {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
  double c0 = 0.0;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;

  int n() const { return static_cast<int>(c.size()); }
  int p() const { return static_cast<int>(b_eq.size()); }
  int q() const { return static_cast<int>(b_in.size()); }

  double objective(const Eigen::VectorXd& x) const { return 0.5 * x.dot(Q * x) + c.dot(x) + c0; }

  /// Throws ValidationError on inconsistent dimensions, asymmetric Q
  /// (> 1e-10), or an eigenvalue of Q below -1e-9.
  void check() const;

  /// Empty program with n variables and zero-row constraint blocks.
  static QuadProgram with_variables(int n);
};

enum class QpStatus { optimal, infeasible, unbounded, max_iterations };

std::string_view to_string(QpStatus status);

struct KktResiduals {
  double primal_eq = 0.0;        // ||A_eq x - b_eq||_inf
  double primal_in = 0.0;        // max(0, max(A_in x - b_in))
  double dual = 0.0;             // ||Qx + c + A_eq' nu + A_in' lambda||_inf
  double complementarity = 0.0;  // sum_i |lambda_i (b_in - A_in x)_i|
};

struct IterationLog {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double mu = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double step = 0.0;
};

struct QpSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd nu;
  Eigen::VectorXd lambda;
  double objective = 0.0;
  QpStatus status = QpStatus::max_iterations;
  int iterations = 0;
  KktResiduals kkt_residuals;

  // Diagnostics.
  std::vector<IterationLog> log;
  double regularization = 0.0;
  int zero_curvature_variables = 0;  // diagonal entries of Q below the floor
  int presolve_removed_variables = 0;
  int presolve_removed_equalities = 0;
  int presolve_removed_inequalities = 0;
};

}  // namespace riskdispatch::qp
