#include "riskdispatch/qp/program.hpp"

#include "riskdispatch/error.hpp"

namespace riskdispatch::qp {

std::string_view to_string(QpStatus status) {
  switch (status) {
    case QpStatus::optimal: return "optimal";
    case QpStatus::infeasible: return "infeasible";
    case QpStatus::unbounded: return "unbounded";
    case QpStatus::max_iterations: return "max-iterations";
  }
  return "unknown";
}

void QuadProgram::check() const {
  const int nv = n();
  if (Q.rows() != nv || Q.cols() != nv) throw ValidationError("Q must be n x n");
  if (A_eq.rows() != p() || A_eq.cols() != nv) throw ValidationError("A_eq must be p x n");
  if (A_in.rows() != q() || A_in.cols() != nv) throw ValidationError("A_in must be q x n");
  if (!Q.allFinite() || !c.allFinite() || !A_eq.allFinite() || !b_eq.allFinite() || !A_in.allFinite() ||
      !b_in.allFinite())
    throw ValidationError("quadratic program has non-finite data");
  if (nv == 0) return;
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw ValidationError("Q is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9 * scale) throw ValidationError("Q is not positive semidefinite");
}

QuadProgram QuadProgram::with_variables(int n) {
  QuadProgram qp;
  qp.Q = Eigen::MatrixXd::Zero(n, n);
  qp.c = Eigen::VectorXd::Zero(n);
  qp.A_eq.resize(0, n);
  qp.b_eq.resize(0);
  qp.A_in.resize(0, n);
  qp.b_in.resize(0);
  return qp;
}

}  // namespace riskdispatch::qp
