#pragma once

#include <string>
#include <vector>

#include "riskdispatch/qp/program.hpp"

namespace riskdispatch::qp {

struct FixedVariable {
  int index = 0;
  double value = 0.0;
  // Singleton inequality rows giving the tightest upper (coefficient > 0)
  // and lower (coefficient < 0) bound; -1 when absent.
  int upper_row = -1;
  double upper_coefficient = 0.0;
  int lower_row = -1;
  double lower_coefficient = 0.0;
};

/// Enough to map a reduced solution back onto the original rows and columns.
struct PresolveRecord {
  int original_n = 0;
  int original_p = 0;
  int original_q = 0;
  std::vector<int> kept_variables;
  std::vector<FixedVariable> fixed_variables;
  std::vector<int> kept_equalities;
  std::vector<int> kept_inequalities;
};

struct PresolveResult {
  QuadProgram reduced;
  PresolveRecord record;
  bool infeasible = false;
  std::string reason;
};

/// Removes variables fixed by equal singleton bounds, empty rows, duplicate
/// equality rows, and equalities that are linear combinations of others
/// (column-pivoted QR on A_eq'). Inconsistent data sets `infeasible`.
PresolveResult presolve(const QuadProgram& qp, double tol = 1e-9);

/// Expands a reduced solution. Dropped equality rows get zero duals (the kept
/// duplicate carries the whole multiplier); bound duals of fixed variables are
/// reconstructed from stationarity. Objective and KKT residuals are evaluated
/// on the original program.
QpSolution postsolve(const QuadProgram& original, const PresolveRecord& record, const QpSolution& reduced);

}  // namespace riskdispatch::qp
