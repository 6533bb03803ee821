#include "riskdispatch/qp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskdispatch/qp/kkt.hpp"
#include "riskdispatch/qp/ldlt.hpp"
#include "riskdispatch/qp/presolve.hpp"

namespace riskdispatch::qp {

namespace {

constexpr double kStepFraction = 0.995;
constexpr double kDualDivergence = 1e8;
constexpr double kPrimalDivergence = 1e10;
constexpr int kRefinementSteps = 3;
constexpr int kStallIterations = 5;
// Primal residual above this (relative to the data) at a stall means no
// feasible point; below it the stall is a numerical floor.
constexpr double kInfeasibleResidual = 1e-6;

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Largest alpha in (0, 1] with v + alpha dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  return alpha;
}

/// Reduced Newton system
///   [ Q + G'WG   A' ] [dx ]   [r1]
///   [ A          0  ] [dnu] = [r2]
/// factored with static regularization and solved with iterative refinement
/// against the unregularized matrix.
class NewtonSystem {
 public:
  explicit NewtonSystem(const QuadProgram& qp) : qp_(qp) {}

  bool factor(const Eigen::VectorXd& weights, double delta) {
    const int n = qp_.n();
    const int p = qp_.p();
    hessian_ = qp_.Q;
    if (qp_.q() > 0) hessian_ += qp_.A_in.transpose() * weights.asDiagonal() * qp_.A_in;
    Eigen::MatrixXd kkt(n + p, n + p);
    kkt.topLeftCorner(n, n) = hessian_;
    kkt.topLeftCorner(n, n).diagonal().array() += delta;
    kkt.bottomLeftCorner(p, n) = qp_.A_eq;
    kkt.topRightCorner(n, p) = qp_.A_eq.transpose();
    kkt.bottomRightCorner(p, p) = -delta * Eigen::MatrixXd::Identity(p, p);
    return ldlt_.compute(kkt);
  }

  void solve(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& dx, Eigen::VectorXd& dnu) const {
    const int n = qp_.n();
    const int p = qp_.p();
    Eigen::VectorXd rhs(n + p);
    rhs << r1, r2;
    Eigen::VectorXd sol = ldlt_.solve(rhs);
    double last = inf_norm(residual(rhs, sol));
    for (int k = 0; k < kRefinementSteps && last > 0.0; ++k) {
      const Eigen::VectorXd candidate = sol + ldlt_.solve(residual(rhs, sol));
      const double now = inf_norm(residual(rhs, candidate));
      if (!(now < last)) break;
      sol = candidate;
      last = now;
    }
    dx = sol.head(n);
    dnu = sol.tail(p);
  }

 private:
  Eigen::VectorXd residual(const Eigen::VectorXd& rhs, const Eigen::VectorXd& sol) const {
    const int n = qp_.n();
    const int p = qp_.p();
    Eigen::VectorXd r(n + p);
    r.head(n) = rhs.head(n) - hessian_ * sol.head(n) - qp_.A_eq.transpose() * sol.tail(p);
    r.tail(p) = rhs.tail(p) - qp_.A_eq * sol.head(n);
    return r;
  }

  const QuadProgram& qp_;
  Eigen::MatrixXd hessian_;
  QuasiDefiniteLdlt ldlt_;
};

QpSolution interior_point(const QuadProgram& qp, const SolverOptions& opt) {
  const int n = qp.n();
  const int p = qp.p();
  const int q = qp.q();
  const Eigen::MatrixXd& G = qp.A_in;
  const Eigen::VectorXd& h = qp.b_in;

  QpSolution sol;
  sol.regularization = opt.regularization;
  for (int j = 0; j < n; ++j)
    if (qp.Q(j, j) <= opt.regularization) ++sol.zero_curvature_variables;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.nu = Eigen::VectorXd::Zero(p);
  sol.lambda = Eigen::VectorXd::Zero(q);

  auto finish = [&](QpStatus status, int iterations) {
    sol.status = status;
    sol.iterations = iterations;
    sol.objective = qp.objective(sol.x);
    sol.kkt_residuals = evaluate_kkt(qp, sol.x, sol.nu, sol.lambda);
    return sol;
  };

  if (n == 0) {
    const bool ok = (p == 0 || inf_norm(qp.b_eq) <= opt.tol) && (q == 0 || h.minCoeff() >= -opt.tol);
    return finish(ok ? QpStatus::optimal : QpStatus::infeasible, 0);
  }

  NewtonSystem newton(qp);
  double delta = opt.regularization;
  auto factor = [&](const Eigen::VectorXd& weights) {
    for (int attempt = 0; attempt < 6; ++attempt) {
      if (newton.factor(weights, delta)) return true;
      delta *= 100.0;
    }
    return false;
  };

  // Starting point: least-squares fit of the inequalities under the
  // equalities, then slacks and duals shifted to be at least one.
  Eigen::VectorXd x, nu;
  if (!factor(Eigen::VectorXd::Ones(q))) return finish(QpStatus::max_iterations, 0);
  {
    Eigen::VectorXd r1 = -qp.c;
    if (q > 0) r1 += G.transpose() * h;
    newton.solve(r1, qp.b_eq, x, nu);
  }
  Eigen::VectorXd s = q > 0 ? Eigen::VectorXd((h - G * x).cwiseMax(1.0)) : Eigen::VectorXd();
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(q);

  if (q == 0) {
    sol.x = x;
    sol.nu = nu;
    const KktResiduals r = evaluate_kkt(qp, x, nu, lambda);
    if (kkt_satisfied(qp, r, opt.tol)) return finish(QpStatus::optimal, 1);
    // Inconsistent stationarity: Q is singular along a direction the
    // equalities leave free, so the objective decreases without bound.
    return finish(inf_norm(qp.A_eq * x - qp.b_eq) <= opt.tol ? QpStatus::unbounded : QpStatus::infeasible, 1);
  }

  const double c_norm = inf_norm(qp.c);
  const double b_norm = std::max(inf_norm(qp.b_eq), inf_norm(h));
  double best_merit = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd r_dual = qp.Q * x + qp.c + qp.A_eq.transpose() * nu + G.transpose() * lambda;
    const Eigen::VectorXd r_eq = qp.A_eq * x - qp.b_eq;
    const Eigen::VectorXd r_in = G * x + s - h;
    const double mu = s.dot(lambda) / q;

    sol.x = x;
    sol.nu = nu;
    sol.lambda = lambda;
    const KktResiduals kkt = evaluate_kkt(qp, x, nu, lambda);

    IterationLog entry;
    entry.iteration = iter;
    entry.primal_objective = qp.objective(x);
    entry.dual_objective = entry.primal_objective + nu.dot(r_eq) + lambda.dot(G * x - h);
    entry.mu = mu;
    entry.primal_residual = std::max(inf_norm(r_eq), inf_norm(r_in));
    entry.dual_residual = inf_norm(r_dual);

    if (kkt_satisfied(qp, kkt, opt.tol)) {
      sol.log.push_back(entry);
      return finish(QpStatus::optimal, iter);
    }
    if (iter >= opt.max_iter) {
      sol.log.push_back(entry);
      return finish(QpStatus::max_iterations, iter);
    }
    const double dual_size = std::max(inf_norm(nu), inf_norm(lambda));
    if (dual_size > kDualDivergence * (1.0 + c_norm) && entry.primal_residual > opt.tol) {
      sol.log.push_back(entry);
      return finish(QpStatus::infeasible, iter);
    }
    if (inf_norm(x) > kPrimalDivergence && entry.primal_residual <= opt.tol * (1.0 + inf_norm(x))) {
      sol.log.push_back(entry);
      return finish(QpStatus::unbounded, iter);
    }
    // Complementarity gone but residuals no longer shrinking.
    const double merit = std::max(entry.primal_residual, entry.dual_residual / (1.0 + c_norm));
    if (merit < 0.9 * best_merit) {
      best_merit = merit;
      stalled = 0;
    } else if (++stalled >= kStallIterations && mu <= 1e-3 * opt.tol) {
      sol.log.push_back(entry);
      const bool infeasible = entry.primal_residual > kInfeasibleResidual * (1.0 + b_norm);
      return finish(infeasible ? QpStatus::infeasible : QpStatus::max_iterations, iter);
    }

    const Eigen::VectorXd weights = lambda.cwiseQuotient(s);
    if (!factor(weights)) {
      sol.log.push_back(entry);
      return finish(QpStatus::max_iterations, iter);
    }

    // Newton direction for complementarity target r_c (s .* lambda -> r_c).
    Eigen::VectorXd dx, dnu, dlambda, ds;
    auto direction = [&](const Eigen::VectorXd& r_c) {
      const Eigen::VectorXd r1 =
          -r_dual - G.transpose() * (weights.cwiseProduct(r_in) - r_c.cwiseQuotient(s));
      newton.solve(r1, -r_eq, dx, dnu);
      dlambda = weights.cwiseProduct(G * dx + r_in) - r_c.cwiseQuotient(s);
      ds = -r_in - G * dx;
    };

    // Predictor.
    direction(s.cwiseProduct(lambda));
    const double alpha_aff = std::min(max_step(s, ds), max_step(lambda, dlambda));
    const double mu_aff = (s + alpha_aff * ds).dot(lambda + alpha_aff * dlambda) / q;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    // Corrector.
    const Eigen::VectorXd r_c = s.cwiseProduct(lambda) + ds.cwiseProduct(dlambda) -
                                Eigen::VectorXd::Constant(q, sigma * mu);
    direction(r_c);
    const double alpha = std::min(1.0, kStepFraction * std::min(max_step(s, ds), max_step(lambda, dlambda)));
    entry.step = alpha;
    sol.log.push_back(entry);

    x += alpha * dx;
    nu += alpha * dnu;
    lambda += alpha * dlambda;
    s += alpha * ds;
  }
}

}  // namespace

QpSolution solve(const QuadProgram& qp, const SolverOptions& options) {
  qp.check();
  if (!options.presolve) return interior_point(qp, options);

  const PresolveResult pre = presolve(qp);
  if (pre.infeasible) {
    QpSolution out;
    out.status = QpStatus::infeasible;
    out.x = Eigen::VectorXd::Zero(qp.n());
    out.nu = Eigen::VectorXd::Zero(qp.p());
    out.lambda = Eigen::VectorXd::Zero(qp.q());
    out.objective = qp.objective(out.x);
    out.kkt_residuals = evaluate_kkt(qp, out.x, out.nu, out.lambda);
    return out;
  }
  return postsolve(qp, pre.record, interior_point(pre.reduced, options));
}

}  // namespace riskdispatch::qp
