#include "riskdispatch/qp/presolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskdispatch/qp/kkt.hpp"

namespace riskdispatch::qp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m, const std::vector<int>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
  return out;
}

int rank_of(const Eigen::MatrixXd& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(threshold);
  return static_cast<int>(qr.rank());
}

}  // namespace

PresolveResult presolve(const QuadProgram& qp, double tol) {
  PresolveResult result;
  auto& rec = result.record;
  rec.original_n = qp.n();
  rec.original_p = qp.p();
  rec.original_q = qp.q();
  auto fail = [&](std::string reason) {
    result.infeasible = true;
    result.reason = std::move(reason);
    return result;
  };

  // Singleton inequality rows act as variable bounds.
  const int n = qp.n();
  std::vector<double> lower(n, -kInf), upper(n, kInf);
  std::vector<FixedVariable> bound_rows(n);
  for (int i = 0; i < qp.q(); ++i) {
    int column = -1;
    int nonzeros = 0;
    for (int j = 0; j < n; ++j) {
      if (qp.A_in(i, j) != 0.0) {
        column = j;
        ++nonzeros;
      }
    }
    if (nonzeros != 1) continue;
    const double a = qp.A_in(i, column);
    const double bound = qp.b_in(i) / a;
    auto& br = bound_rows[column];
    if (a > 0.0 && bound < upper[column]) {
      upper[column] = bound;
      br.upper_row = i;
      br.upper_coefficient = a;
    } else if (a < 0.0 && bound > lower[column]) {
      lower[column] = bound;
      br.lower_row = i;
      br.lower_coefficient = a;
    }
  }

  Eigen::VectorXd fixed_values = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j])) {
      rec.kept_variables.push_back(j);
      continue;
    }
    const double scale = std::max({1.0, std::abs(lower[j]), std::abs(upper[j])});
    if (lower[j] > upper[j] + tol * scale)
      return fail("variable " + std::to_string(j) + " has lower bound above its upper bound");
    if (upper[j] - lower[j] <= tol * scale) {
      FixedVariable fv = bound_rows[j];
      fv.index = j;
      fv.value = lower[j] + 0.5 * (upper[j] - lower[j]);
      fixed_values(j) = fv.value;
      rec.fixed_variables.push_back(fv);
    } else {
      rec.kept_variables.push_back(j);
    }
  }

  // Substitute fixed values.
  const auto& kept = rec.kept_variables;
  QuadProgram red;
  red.Q = select_cols(select_rows(qp.Q, kept), kept);
  red.c = select(qp.c, kept) + select_rows(qp.Q, kept) * fixed_values;
  red.c0 = qp.c0 + qp.c.dot(fixed_values) + 0.5 * fixed_values.dot(qp.Q * fixed_values);
  const Eigen::MatrixXd a_eq = select_cols(qp.A_eq, kept);
  const Eigen::VectorXd b_eq = qp.b_eq - qp.A_eq * fixed_values;
  const Eigen::MatrixXd a_in = select_cols(qp.A_in, kept);
  const Eigen::VectorXd b_in = qp.b_in - qp.A_in * fixed_values;

  // Empty inequality rows.
  for (int i = 0; i < qp.q(); ++i) {
    if (a_in.cols() == 0 || a_in.row(i).cwiseAbs().maxCoeff() == 0.0) {
      if (b_in(i) < -tol * std::max(1.0, std::abs(qp.b_in(i))))
        return fail("inequality row " + std::to_string(i) + " is violated after fixing variables");
    } else {
      rec.kept_inequalities.push_back(i);
    }
  }
  red.A_in = select_rows(a_in, rec.kept_inequalities);
  red.b_in = select(b_in, rec.kept_inequalities);

  // Empty and duplicate equality rows.
  std::vector<int> candidates;
  for (int i = 0; i < qp.p(); ++i) {
    const bool empty = a_eq.cols() == 0 || a_eq.row(i).cwiseAbs().maxCoeff() == 0.0;
    if (empty) {
      if (std::abs(b_eq(i)) > tol * std::max(1.0, std::abs(qp.b_eq(i))))
        return fail("equality row " + std::to_string(i) + " reads 0 = " + std::to_string(b_eq(i)));
      continue;
    }
    bool duplicate = false;
    for (int k : candidates) {
      if (a_eq.row(k) == a_eq.row(i)) {
        if (std::abs(b_eq(k) - b_eq(i)) > tol * std::max({1.0, std::abs(b_eq(k)), std::abs(b_eq(i))}))
          return fail("equality rows " + std::to_string(k) + " and " + std::to_string(i) + " are inconsistent");
        duplicate = true;
        break;
      }
    }
    if (!duplicate) candidates.push_back(i);
  }

  // Linearly dependent equality rows.
  const Eigen::MatrixXd rows = select_rows(a_eq, candidates);
  const Eigen::VectorXd rhs = select(b_eq, candidates);
  rec.kept_equalities = candidates;
  if (!candidates.empty()) {
    constexpr double kRankThreshold = 1e-10;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
    qr.setThreshold(kRankThreshold);
    const int rank = static_cast<int>(qr.rank());
    if (rank < static_cast<int>(candidates.size())) {
      Eigen::MatrixXd augmented(rows.cols() + 1, rows.rows());
      augmented << rows.transpose(), rhs.transpose();
      if (rank_of(augmented, kRankThreshold) > rank) return fail("equality constraints are inconsistent");
      std::vector<int> independent;
      for (int k = 0; k < rank; ++k) independent.push_back(candidates[qr.colsPermutation().indices()(k)]);
      std::sort(independent.begin(), independent.end());
      rec.kept_equalities = independent;
    }
  }
  red.A_eq = select_rows(a_eq, rec.kept_equalities);
  red.b_eq = select(b_eq, rec.kept_equalities);

  result.reduced = std::move(red);
  return result;
}

QpSolution postsolve(const QuadProgram& original, const PresolveRecord& rec, const QpSolution& reduced) {
  QpSolution out = reduced;
  out.x = Eigen::VectorXd::Zero(rec.original_n);
  out.nu = Eigen::VectorXd::Zero(rec.original_p);
  out.lambda = Eigen::VectorXd::Zero(rec.original_q);
  for (std::size_t j = 0; j < rec.kept_variables.size(); ++j) out.x(rec.kept_variables[j]) = reduced.x(j);
  for (const auto& fv : rec.fixed_variables) out.x(fv.index) = fv.value;
  for (std::size_t i = 0; i < rec.kept_equalities.size(); ++i) out.nu(rec.kept_equalities[i]) = reduced.nu(i);
  for (std::size_t i = 0; i < rec.kept_inequalities.size(); ++i)
    out.lambda(rec.kept_inequalities[i]) = reduced.lambda(i);

  if (!rec.fixed_variables.empty()) {
    Eigen::VectorXd stationarity = original.Q * out.x + original.c;
    if (original.p() > 0) stationarity += original.A_eq.transpose() * out.nu;
    if (original.q() > 0) stationarity += original.A_in.transpose() * out.lambda;
    for (const auto& fv : rec.fixed_variables) {
      const double need = -stationarity(fv.index);
      if (need > 0.0 && fv.upper_row >= 0) {
        out.lambda(fv.upper_row) = need / fv.upper_coefficient;
      } else if (need < 0.0 && fv.lower_row >= 0) {
        out.lambda(fv.lower_row) = need / fv.lower_coefficient;
      }
    }
  }

  out.objective = original.objective(out.x);
  out.kkt_residuals = evaluate_kkt(original, out.x, out.nu, out.lambda);
  out.presolve_removed_variables = static_cast<int>(rec.fixed_variables.size());
  out.presolve_removed_equalities = rec.original_p - static_cast<int>(rec.kept_equalities.size());
  out.presolve_removed_inequalities = rec.original_q - static_cast<int>(rec.kept_inequalities.size());
  return out;
}

}  // namespace riskdispatch::qp
