#include "riskdispatch/dispatch/dispatch.hpp"

#include <cmath>
#include <sstream>

#include "riskdispatch/error.hpp"

namespace riskdispatch::dispatch {

DispatchProblem DispatchProblem::create(grid::GridCase grid, grid::DcModel model, scenario::ReserveVector reserve) {
  if (model.num_buses() != grid.num_buses() || model.num_branches() != grid.num_branches())
    throw ValidationError("DC model dimensions do not match the case");
  if (model.ref_bus != grid.ref_bus) throw ValidationError("DC model reference bus differs from the case");
  if (reserve.z_res.size() != static_cast<Eigen::Index>(grid.wind_farms.size()))
    throw ValidationError("reserve vector has " + std::to_string(reserve.z_res.size()) + " entries for " +
                          std::to_string(grid.wind_farms.size()) + " wind farms");
  if (!reserve.z_res.allFinite() || (reserve.z_res.array() < 0.0).any())
    throw ValidationError("reserve vector must be finite and non-negative");
  return DispatchProblem{std::move(grid), std::move(model), std::move(reserve)};
}

VariableLayout DispatchProblem::variables() const {
  return VariableLayout{static_cast<int>(grid.generators.size()), static_cast<int>(grid.wind_farms.size()),
                        grid.num_buses()};
}

RowLayout DispatchProblem::rows() const {
  return RowLayout{grid.num_buses(), grid.num_branches(), static_cast<int>(grid.generators.size()),
                   static_cast<int>(grid.wind_farms.size())};
}

qp::QuadProgram assemble(const grid::GridCase& grid, const grid::DcModel& model,
                         const scenario::ReserveVector& reserve) {
  const auto problem = DispatchProblem::create(grid, model, reserve);
  const VariableLayout var = problem.variables();
  const RowLayout row = problem.rows();
  const double base = grid.base_mva;

  qp::QuadProgram qp = qp::QuadProgram::with_variables(var.size());
  for (int g = 0; g < var.generators; ++g) {
    const auto& gen = grid.generators[g];
    qp.Q(var.p(g), var.p(g)) = 2.0 * gen.cost_c2;
    qp.c(var.p(g)) = gen.cost_c1;
    qp.c0 += gen.cost_c0;
  }

  qp.A_eq = Eigen::MatrixXd::Zero(row.equalities(), var.size());
  qp.b_eq = Eigen::VectorXd::Zero(row.equalities());
  for (int g = 0; g < var.generators; ++g) qp.A_eq(row.balance(grid.generators[g].bus), var.p(g)) += 1.0;
  for (int f = 0; f < var.farms; ++f) qp.A_eq(row.balance(grid.wind_farms[f].bus), var.w(f)) += 1.0;
  for (int m = 0; m < var.buses; ++m) {
    for (int k = 0; k < var.buses; ++k) qp.A_eq(row.balance(m), var.theta(k)) = -base * model.admittance(m, k);
    qp.b_eq(row.balance(m)) = grid.buses[m].load_mw;
  }
  qp.A_eq(row.reference(), var.theta(model.ref_bus)) = 1.0;

  qp.A_in = Eigen::MatrixXd::Zero(row.inequalities(), var.size());
  qp.b_in = Eigen::VectorXd::Zero(row.inequalities());
  for (int l = 0; l < row.lines; ++l) {
    for (int k = 0; k < var.buses; ++k) {
      const double h = base * model.flow_matrix(l, k);
      qp.A_in(row.flow_upper(l), var.theta(k)) = h;
      qp.A_in(row.flow_lower(l), var.theta(k)) = -h;
    }
    qp.b_in(row.flow_upper(l)) = grid.branches[l].flow_limit_mw;
    qp.b_in(row.flow_lower(l)) = grid.branches[l].flow_limit_mw;
  }
  for (int g = 0; g < var.generators; ++g) {
    qp.A_in(row.p_max(g), var.p(g)) = 1.0;
    qp.b_in(row.p_max(g)) = grid.generators[g].p_max_mw;
    qp.A_in(row.p_min(g), var.p(g)) = -1.0;
    qp.b_in(row.p_min(g)) = -grid.generators[g].p_min_mw;
  }
  for (int f = 0; f < var.farms; ++f) {
    qp.A_in(row.w_max(f), var.w(f)) = 1.0;
    qp.b_in(row.w_max(f)) = reserve.z_res(f);
    qp.A_in(row.w_min(f), var.w(f)) = -1.0;
  }
  return qp;
}

namespace {

std::string mw(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v << " MW";
  return out.str();
}

[[noreturn]] void diagnose_infeasible(const DispatchProblem& problem, const qp::QuadProgram& qp,
                                      const qp::SolverOptions& options) {
  // Drop the line limits; if that is solvable the network is the culprit.
  const RowLayout row = problem.rows();
  qp::QuadProgram relaxed = qp;
  const int keep = row.inequalities() - 2 * row.lines;
  relaxed.A_in = qp.A_in.bottomRows(keep);
  relaxed.b_in = qp.b_in.tail(keep);
  const auto result = qp::solve(relaxed, options);
  if (result.status == qp::QpStatus::optimal)
    throw InfeasibleError("transmission-limited: demand cannot be delivered within line flow limits");
  throw InfeasibleError("supply infeasibility: no generation and wind schedule balances the loads");
}

}  // namespace

DispatchSolution solve_dispatch(const DispatchProblem& problem, const qp::SolverOptions& options) {
  const auto& grid = problem.grid;
  const double demand = grid.total_load_mw();
  double p_max = 0.0, p_min = 0.0;
  for (const auto& g : grid.generators) {
    p_max += g.p_max_mw;
    p_min += g.p_min_mw;
  }
  const double wind = problem.reserve.z_res.sum();
  const double slack = 1e-9 * std::max(1.0, demand);
  if (demand > p_max + wind + slack)
    throw InfeasibleError("inadequate supply: demand " + mw(demand) + " exceeds conventional capacity " + mw(p_max) +
                          " plus wind reserve " + mw(wind));
  if (demand < p_min - slack)
    throw InfeasibleError("excess minimum generation: demand " + mw(demand) + " is below total p_min " + mw(p_min));

  const qp::QuadProgram qp = assemble(grid, problem.model, problem.reserve);
  qp::QpSolution result = qp::solve(qp, options);
  switch (result.status) {
    case qp::QpStatus::optimal: break;
    case qp::QpStatus::infeasible: diagnose_infeasible(problem, qp, options);
    case qp::QpStatus::unbounded: throw SolverError("dispatch program reported unbounded");
    case qp::QpStatus::max_iterations:
      throw SolverError("interior point stopped after " + std::to_string(result.iterations) + " iterations");
  }

  const VariableLayout var = problem.variables();
  const RowLayout row = problem.rows();
  DispatchSolution out;
  out.p_g = result.x.segment(var.p(0), var.generators);
  out.w = result.x.segment(var.w(0), var.farms);
  out.theta = result.x.segment(var.theta(0), var.buses);
  // Angles are defined up to a common shift (B 1 = 0, H 1 = 0); pin the
  // reference exactly.
  out.theta.array() -= out.theta(problem.model.ref_bus);
  out.flows = grid.base_mva * (problem.model.flow_matrix * out.theta);
  out.objective = result.objective;
  out.lmp = -result.nu.head(var.buses);

  out.flow_duals.resize(row.lines, 2);
  for (int l = 0; l < row.lines; ++l) {
    out.flow_duals(l, 0) = result.lambda(row.flow_upper(l));
    out.flow_duals(l, 1) = result.lambda(row.flow_lower(l));
    if (out.flow_duals.row(l).maxCoeff() > kBindingDual) out.binding_lines.push_back(l);
  }

  Eigen::VectorXd injection = Eigen::VectorXd::Zero(var.buses);
  for (int g = 0; g < var.generators; ++g) injection(grid.generators[g].bus) += out.p_g(g);
  for (int f = 0; f < var.farms; ++f) injection(grid.wind_farms[f].bus) += out.w(f);
  for (int m = 0; m < var.buses; ++m) injection(m) -= grid.buses[m].load_mw;
  const Eigen::VectorXd mismatch = injection / grid.base_mva - problem.model.admittance * out.theta;
  out.balance_residual_pu = mismatch.cwiseAbs().maxCoeff();

  out.solver = std::move(result);
  return out;
}

Curtailment curtailment(const Eigen::VectorXd& actual, const Eigen::VectorXd& w) {
  if (actual.size() != w.size()) throw ValidationError("curtailment: actual and scheduled lengths differ");
  Curtailment out;
  out.spilled = (actual - w).cwiseMax(0.0);
  out.shortfall.resize(static_cast<std::size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) out.shortfall[static_cast<std::size_t>(i)] = actual(i) < w(i);
  return out;
}

}  // namespace riskdispatch::dispatch
