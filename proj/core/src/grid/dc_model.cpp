#include "riskdispatch/grid/dc_model.hpp"

namespace riskdispatch::grid {

DcModel build_dc_model(const GridCase& grid) {
  const int m = grid.num_buses();
  const int l = grid.num_branches();

  DcModel model;
  model.ref_bus = grid.ref_bus;
  model.incidence = Eigen::MatrixXd::Zero(l, m);
  model.susceptance.resize(l);
  for (int k = 0; k < l; ++k) {
    const auto& br = grid.branches[k];
    model.incidence(k, br.from_bus) = 1.0;
    model.incidence(k, br.to_bus) = -1.0;
    model.susceptance(k) = 1.0 / br.reactance;
  }
  model.flow_matrix = model.susceptance.asDiagonal() * model.incidence;
  model.admittance = model.incidence.transpose() * model.flow_matrix;
  // Exact symmetry; the product above is symmetric only up to rounding order.
  model.admittance = 0.5 * (model.admittance + model.admittance.transpose()).eval();
  return model;
}

}  // namespace riskdispatch::grid
