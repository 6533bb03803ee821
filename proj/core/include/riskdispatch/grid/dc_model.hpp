#pragma once

#include <Eigen/Dense>

#include "riskdispatch/grid/case.hpp"

namespace riskdispatch::grid {

/// DC power-flow matrices in per-unit. Row l of `incidence` is branch l with
/// +1 at its from-bus and -1 at its to-bus; `susceptance` holds 1/x_l;
/// admittance B = A^T D A and flow matrix H = D A, so line flows are H theta.
struct DcModel {
  Eigen::MatrixXd incidence;
  Eigen::VectorXd susceptance;
  Eigen::MatrixXd admittance;
  Eigen::MatrixXd flow_matrix;
  int ref_bus = 0;

  Eigen::DiagonalMatrix<double, Eigen::Dynamic> susceptance_diag() const { return susceptance.asDiagonal(); }
  int num_buses() const { return static_cast<int>(admittance.rows()); }
  int num_branches() const { return static_cast<int>(incidence.rows()); }
};

DcModel build_dc_model(const GridCase& grid);

}  // namespace riskdispatch::grid
