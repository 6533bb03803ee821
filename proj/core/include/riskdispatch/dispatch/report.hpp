#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "riskdispatch/dispatch/dispatch.hpp"

namespace riskdispatch::dispatch {

/// JSON document with schedules, LMPs, flows, binding lines and solver
/// diagnostics. Buses are reported by external id.
std::string solution_to_json(const DispatchProblem& problem, const DispatchSolution& solution);

/// `bus,lmp` rows in internal bus order.
std::string lmp_csv(const DispatchProblem& problem, const DispatchSolution& solution);

/// `line,from_bus,to_bus,flow_mw,limit_mw,dual_upper,dual_lower,binding` rows.
std::string flow_csv(const DispatchProblem& problem, const DispatchSolution& solution);

/// The scheduled wind vector `w` (MW, wind-farm order) from solution JSON.
Eigen::VectorXd schedule_from_json(std::string_view json_text);

/// The risk level recorded in solution JSON, if it lies in (0,1).
std::optional<double> alpha_from_json(std::string_view json_text);

}  // namespace riskdispatch::dispatch
