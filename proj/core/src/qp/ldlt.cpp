#include "riskdispatch/qp/ldlt.hpp"

#include <cmath>

namespace riskdispatch::qp {

bool QuasiDefiniteLdlt::compute(const Eigen::MatrixXd& matrix) {
  const Eigen::Index n = matrix.rows();
  l_ = Eigen::MatrixXd::Identity(n, n);
  d_.resize(n);
  // Column j of W holds L(:,j) * d_j during elimination.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double dj = matrix(j, j);
    for (Eigen::Index k = 0; k < j; ++k) dj -= l_(j, k) * w(j, k);
    if (!std::isfinite(dj) || dj == 0.0) return false;
    d_(j) = dj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = matrix(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l_(i, k) * w(j, k);
      w(i, j) = v;
      l_(i, j) = v / dj;
    }
  }
  return true;
}

Eigen::VectorXd QuasiDefiniteLdlt::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd y = l_.triangularView<Eigen::UnitLower>().solve(rhs);
  y.array() /= d_.array();
  return l_.transpose().triangularView<Eigen::UnitUpper>().solve(y);
}

}  // namespace riskdispatch::qp
