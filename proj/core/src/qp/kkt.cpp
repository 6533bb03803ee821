#include "riskdispatch/qp/kkt.hpp"

#include <algorithm>

#include "riskdispatch/error.hpp"

namespace riskdispatch::qp {

KktResiduals evaluate_kkt(const QuadProgram& qp, const Eigen::VectorXd& x, const Eigen::VectorXd& nu,
                          const Eigen::VectorXd& lambda) {
  if (x.size() != qp.n() || nu.size() != qp.p() || lambda.size() != qp.q())
    throw ValidationError("KKT evaluation: vector sizes do not match the program");
  KktResiduals r;
  if (qp.p() > 0) r.primal_eq = (qp.A_eq * x - qp.b_eq).cwiseAbs().maxCoeff();
  Eigen::VectorXd stationarity = qp.Q * x + qp.c;
  if (qp.p() > 0) stationarity += qp.A_eq.transpose() * nu;
  if (qp.q() > 0) {
    const Eigen::VectorXd slack = qp.b_in - qp.A_in * x;
    r.primal_in = std::max(0.0, (-slack).maxCoeff());
    r.complementarity = (lambda.array() * slack.array()).abs().sum();
    stationarity += qp.A_in.transpose() * lambda;
  }
  if (qp.n() > 0) r.dual = stationarity.cwiseAbs().maxCoeff();
  return r;
}

bool kkt_satisfied(const QuadProgram& qp, const KktResiduals& r, double tol) {
  const double c_norm = qp.n() > 0 ? qp.c.cwiseAbs().maxCoeff() : 0.0;
  return r.dual <= tol * (1.0 + c_norm) && r.primal_eq <= tol && r.primal_in <= tol &&
         r.complementarity <= tol * std::max(qp.q(), 1);
}

}  // namespace riskdispatch::qp
