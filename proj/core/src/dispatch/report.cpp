#include "riskdispatch/dispatch/report.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskdispatch/error.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace riskdispatch::dispatch {

using nlohmann::ordered_json;
using toml::format_number;

std::string solution_to_json(const DispatchProblem& problem, const DispatchSolution& sol) {
  const auto& grid = problem.grid;
  ordered_json doc;
  doc["objective"] = sol.objective;

  auto& gens = doc["generators"] = ordered_json::array();
  for (std::size_t g = 0; g < grid.generators.size(); ++g)
    gens.push_back({{"bus", grid.buses[grid.generators[g].bus].id}, {"p_mw", sol.p_g(g)}});

  ordered_json w = ordered_json::array();
  auto& farms = doc["wind_farms"] = ordered_json::array();
  for (std::size_t f = 0; f < grid.wind_farms.size(); ++f) {
    w.push_back(sol.w(f));
    farms.push_back({{"bus", grid.buses[grid.wind_farms[f].bus].id},
                     {"w_mw", sol.w(f)},
                     {"reserve_mw", problem.reserve.z_res(f)}});
  }
  doc["w"] = w;
  doc["reserve_method"] = std::string(scenario::to_string(problem.reserve.method));
  doc["alpha"] = problem.reserve.alpha;

  auto& buses = doc["buses"] = ordered_json::array();
  for (int m = 0; m < grid.num_buses(); ++m)
    buses.push_back({{"bus", grid.buses[m].id}, {"theta_rad", sol.theta(m)}, {"lmp", sol.lmp(m)}});

  auto& lines = doc["lines"] = ordered_json::array();
  for (int l = 0; l < grid.num_branches(); ++l) {
    const auto& br = grid.branches[l];
    lines.push_back({{"from_bus", grid.buses[br.from_bus].id},
                     {"to_bus", grid.buses[br.to_bus].id},
                     {"flow_mw", sol.flows(l)},
                     {"limit_mw", br.flow_limit_mw},
                     {"dual_upper", sol.flow_duals(l, 0)},
                     {"dual_lower", sol.flow_duals(l, 1)}});
  }
  doc["binding_lines"] = sol.binding_lines;

  const auto& s = sol.solver;
  doc["solver"] = {{"status", std::string(qp::to_string(s.status))},
                   {"iterations", s.iterations},
                   {"kkt_residuals",
                    {{"primal_eq", s.kkt_residuals.primal_eq},
                     {"primal_in", s.kkt_residuals.primal_in},
                     {"dual", s.kkt_residuals.dual},
                     {"complementarity", s.kkt_residuals.complementarity}}},
                   {"regularization", s.regularization},
                   {"zero_curvature_variables", s.zero_curvature_variables},
                   {"presolve_removed_variables", s.presolve_removed_variables},
                   {"balance_residual_pu", sol.balance_residual_pu}};
  return doc.dump(2) + "\n";
}

std::string lmp_csv(const DispatchProblem& problem, const DispatchSolution& sol) {
  std::ostringstream out;
  out << "bus,lmp\n";
  for (int m = 0; m < problem.grid.num_buses(); ++m)
    out << problem.grid.buses[m].id << ',' << format_number(sol.lmp(m)) << '\n';
  return out.str();
}

std::string flow_csv(const DispatchProblem& problem, const DispatchSolution& sol) {
  const auto& grid = problem.grid;
  std::ostringstream out;
  out << "line,from_bus,to_bus,flow_mw,limit_mw,dual_upper,dual_lower,binding\n";
  for (int l = 0; l < grid.num_branches(); ++l) {
    const auto& br = grid.branches[l];
    const bool binding = std::find(sol.binding_lines.begin(), sol.binding_lines.end(), l) != sol.binding_lines.end();
    out << l + 1 << ',' << grid.buses[br.from_bus].id << ',' << grid.buses[br.to_bus].id << ','
        << format_number(sol.flows(l)) << ',' << format_number(br.flow_limit_mw) << ','
        << format_number(sol.flow_duals(l, 0)) << ',' << format_number(sol.flow_duals(l, 1)) << ','
        << (binding ? 1 : 0) << '\n';
  }
  return out.str();
}

Eigen::VectorXd schedule_from_json(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("solution JSON: ") + e.what());
  }
  if (!doc.contains("w") || !doc["w"].is_array()) throw ParseError("solution JSON has no 'w' array");
  const auto& arr = doc["w"];
  Eigen::VectorXd w(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError("solution JSON: 'w' entries must be numbers");
    w(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return w;
}

std::optional<double> alpha_from_json(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("solution JSON: ") + e.what());
  }
  if (!doc.contains("alpha") || !doc["alpha"].is_number()) return std::nullopt;
  const double a = doc["alpha"].get<double>();
  if (!(a > 0.0 && a < 1.0)) return std::nullopt;
  return a;
}

}  // namespace riskdispatch::dispatch
