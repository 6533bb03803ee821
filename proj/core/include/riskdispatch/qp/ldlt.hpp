#pragma once

#include <Eigen/Dense>

namespace riskdispatch::qp {

/// Dense LDL^T without pivoting for symmetric quasi-definite matrices
///   [ H   A^T ]
///   [ A   -E  ]   with H, E positive definite,
/// which admit such a factorization for every symmetric ordering. Only the
/// lower triangle of the input is read.
class QuasiDefiniteLdlt {
 public:
  QuasiDefiniteLdlt() = default;
  explicit QuasiDefiniteLdlt(const Eigen::MatrixXd& matrix) { compute(matrix); }

  /// Returns false (and leaves the factor unusable) on a zero or non-finite pivot.
  bool compute(const Eigen::MatrixXd& matrix);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  const Eigen::MatrixXd& matrix_l() const { return l_; }
  const Eigen::VectorXd& vector_d() const { return d_; }

 private:
  Eigen::MatrixXd l_;
  Eigen::VectorXd d_;
};

}  // namespace riskdispatch::qp
