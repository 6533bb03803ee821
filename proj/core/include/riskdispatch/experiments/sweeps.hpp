#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "riskdispatch/dispatch/dispatch.hpp"
#include "riskdispatch/experiments/config.hpp"
#include "riskdispatch/experiments/trace.hpp"
#include "riskdispatch/grid/case.hpp"
#include "riskdispatch/grid/dc_model.hpp"
#include "riskdispatch/risk/validator.hpp"
#include "riskdispatch/scenario/forecast.hpp"
#include "riskdispatch/scenario/reserve.hpp"

namespace riskdispatch::experiments {

/// Low-wind and high-wind forecast means for the seven 30-bus farms (MW).
inline const std::vector<double> kLowWindMean{1.15, 1.37, 0.47, 1.05, 1.45, 1.64, 0.00};
inline const std::vector<double> kHighWindMean{6.00, 0.31, 7.66, 8.01, 8.42, 8.44, 8.46};

/// Mean vector for a scenario spec: "low-wind", "high-wind", "trace-hour:t"
/// (row t of the cleaned MW trace, 0-based), or comma-separated MW values.
Eigen::VectorXd scenario_mean(std::string_view spec, const WindTrace& trace_mw);

/// Trace in MW: normalized traces are multiplied column-wise by farm capacity.
WindTrace trace_in_mw(const WindTrace& trace, const grid::GridCase& grid, bool normalized);

/// Forecast with the configured mean (times mean_scale) and the sample
/// covariance of the MW trace. The trace must already be free of missing rows.
scenario::ForecastModel make_scenario(const ExperimentConfig& config, const WindTrace& trace_mw,
                                      std::vector<std::string>* warnings = nullptr);

/// Everything shared by the cells of a sweep.
struct ExperimentSetup {
  grid::GridCase grid;  // after penetration scaling
  grid::DcModel model;
  WindTrace trace_mw;   // cleaned
  int dropped_trace_rows = 0;
  scenario::ForecastModel forecast;
  scenario::ScenarioSet scenarios;
  std::vector<std::string> notes;
};

ExperimentSetup prepare_experiment(const ExperimentConfig& config);

struct AlphaRow {
  double alpha = 0.0;
  scenario::ReserveVector reserve;
  dispatch::DispatchSolution solution;
  std::optional<risk::RiskReport> risk;
};

/// One row per alpha, ascending. Throws InfeasibleError (prefixed with the
/// alpha) if any cell is infeasible, and SolverError if the objective rises
/// with alpha by more than 1e-7.
std::vector<AlphaRow> run_alpha_sweep(const ExperimentConfig& config, const ExperimentSetup& setup);

enum class CellStatus { optimal, infeasible, solver_failure };

std::string_view to_string(CellStatus status);

struct BetaCell {
  double alpha = 0.0;
  double beta = 0.0;
  CellStatus status = CellStatus::optimal;
  std::string diagnosis;
  std::optional<dispatch::DispatchSolution> solution;
};

/// Cells in (alpha, beta) ascending order with loads scaled by beta. Failed
/// cells are recorded and the sweep continues.
std::vector<BetaCell> run_beta_sweep(const ExperimentConfig& config, const ExperimentSetup& setup);

struct LmpSummary {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

LmpSummary summarize_lmp(const Eigen::VectorXd& lmp);

/// CSV tables (alpha_sweep, reserves, beta_sweep, lmp_profiles). Empty
/// sweeps produce no file. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config, const ExperimentSetup& setup,
                                                 const std::vector<AlphaRow>& alpha_rows,
                                                 const std::vector<BetaCell>& beta_cells);

std::string alpha_sweep_csv(const ExperimentSetup& setup, const std::vector<AlphaRow>& rows);
std::string reserves_csv(const ExperimentSetup& setup, const std::vector<AlphaRow>& rows);
std::string beta_sweep_csv(const std::vector<BetaCell>& cells);
std::string lmp_profiles_csv(const ExperimentSetup& setup, const std::vector<AlphaRow>& alpha_rows,
                             const std::vector<BetaCell>& beta_cells);

}  // namespace riskdispatch::experiments
