// dispatch: command-line front end for risk-limited DC dispatch.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskdispatch/dispatch/dispatch.hpp"
#include "riskdispatch/dispatch/report.hpp"
#include "riskdispatch/error.hpp"
#include "riskdispatch/experiments/config.hpp"
#include "riskdispatch/experiments/sweeps.hpp"
#include "riskdispatch/experiments/trace.hpp"
#include "riskdispatch/grid/case_io.hpp"
#include "riskdispatch/risk/validator.hpp"
#include "riskdispatch/scenario/forecast_io.hpp"
#include "riskdispatch/scenario/reserve.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace rd = riskdispatch;

namespace {

enum Exit : int { kOk = 0, kInfeasible = 2, kInput = 3, kSolver = 4 };

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rd::ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rd::ValidationError("cannot write " + path.string());
  out << body;
}

void print_notes(const std::vector<std::string>& notes) {
  for (const auto& n : notes) std::cerr << "note: " << n << '\n';
}

struct SolveArgs {
  std::string case_path;
  std::string scenario = "high-wind";
  double alpha = 0.05;
  int samples = 1000;
  std::uint64_t seed = 2013;
  std::string method = "order-statistic";
  double delta = 0.0;
  double beta = 1.0;
  double mean_scale = 1.0;
  std::string trace_path;
  bool trace_mw = false;
  int synthetic_hours = 589;
  std::uint64_t synthetic_seed = 7;
  std::vector<int> wind_buses;
  double penetration = 0.2;
  bool clip = false;
  long trials = 0;
  int jobs = 1;
  double tol = 1e-9;
  std::string out_json;
  std::string lmp_csv;
  std::string flow_csv;
  std::string model_out;
};

int run_solve(const SolveArgs& a) {
  rd::experiments::ExperimentConfig config;
  config.case_path = a.case_path;
  config.wind_buses = a.wind_buses;
  if (!a.trace_path.empty()) config.trace_path = a.trace_path;
  config.trace_normalized = !a.trace_mw;
  config.synthetic_hours = a.synthetic_hours;
  config.synthetic_seed = a.synthetic_seed;
  config.scenario = a.scenario;
  config.mean_scale = a.mean_scale;
  config.alpha_list = {a.alpha};
  config.samples = a.samples;
  config.seed = a.seed;
  config.clip_to_capacity = a.clip;
  config.penetration = a.penetration;
  config.conventional_scale = 1.0 - a.penetration;
  config.solver_tol = a.tol;
  config.jobs = a.jobs;
  config.n_trials = a.trials;
  config.validate_risk = a.trials > 0;

  const auto setup = rd::experiments::prepare_experiment(config);
  print_notes(setup.notes);

  rd::scenario::ReserveVector reserve;
  if (a.method == "order-statistic") {
    reserve = rd::scenario::reserve_order_statistic(setup.scenarios, a.alpha);
  } else if (a.method == "min") {
    reserve = rd::scenario::reserve_min(setup.scenarios);
  } else if (a.method == "min-plus-delta") {
    reserve = rd::scenario::reserve_boosted(
        setup.scenarios, Eigen::VectorXd::Constant(setup.scenarios.dimension(), a.delta));
  } else {
    throw rd::ValidationError("unknown reserve method '" + a.method + "'");
  }

  auto grid = a.beta == 1.0 ? setup.grid : rd::grid::scale_loads(setup.grid, a.beta);
  const auto problem = rd::dispatch::DispatchProblem::create(std::move(grid), setup.model, reserve);
  rd::qp::SolverOptions opts;
  opts.tol = a.tol;
  const auto sol = rd::dispatch::solve_dispatch(problem, opts);

  const std::string json = rd::dispatch::solution_to_json(problem, sol);
  if (a.out_json.empty())
    std::cout << json;
  else
    write_file(a.out_json, json);
  if (!a.lmp_csv.empty()) write_file(a.lmp_csv, rd::dispatch::lmp_csv(problem, sol));
  if (!a.flow_csv.empty()) write_file(a.flow_csv, rd::dispatch::flow_csv(problem, sol));
  if (!a.model_out.empty()) write_file(a.model_out, rd::scenario::serialize_forecast(setup.forecast));

  std::cerr << "objective " << rd::toml::format_number(sol.objective) << " $/h, " << sol.solver.iterations
            << " iterations, " << sol.binding_lines.size() << " binding lines\n";
  if (a.trials > 0) {
    const auto report = rd::risk::validate(sol.w, setup.forecast, a.trials, a.seed, a.alpha, a.jobs);
    std::cerr << "empirical risk " << rd::toml::format_number(report.empirical_risk) << " +/- "
              << rd::toml::format_number(report.ci_halfwidth) << (report.pass ? " (pass)" : " (fail)") << '\n';
  }
  return kOk;
}

int run_sweep(const std::string& config_path, int jobs_override) {
  auto config = rd::experiments::load_experiment_config(config_path);
  if (jobs_override > 0) config.jobs = jobs_override;
  const auto setup = rd::experiments::prepare_experiment(config);
  print_notes(setup.notes);
  const auto alpha_rows = rd::experiments::run_alpha_sweep(config, setup);
  const auto beta_cells = rd::experiments::run_beta_sweep(config, setup);
  for (const auto& path : rd::experiments::write_outputs(config, setup, alpha_rows, beta_cells))
    std::cout << path.string() << '\n';
  for (const auto& cell : beta_cells)
    if (cell.status != rd::experiments::CellStatus::optimal)
      std::cerr << "alpha " << rd::toml::format_number(cell.alpha) << " beta " << rd::toml::format_number(cell.beta)
                << ": " << cell.diagnosis << '\n';
  return kOk;
}

int run_validate(const std::string& solution_path, const std::string& model_path, long trials, std::uint64_t seed,
                 double alpha, int jobs) {
  const std::string text = read_file(solution_path);
  const Eigen::VectorXd w = rd::dispatch::schedule_from_json(text);
  const auto model = rd::scenario::load_forecast_file(model_path);
  if (!(alpha > 0.0)) {
    const auto recorded = rd::dispatch::alpha_from_json(text);
    if (!recorded) throw rd::ValidationError("solution has no alpha; pass --alpha");
    alpha = *recorded;
  }
  const auto report = rd::risk::validate(w, model, trials, seed, alpha, jobs);
  std::cout << rd::risk::to_json(report);
  return kOk;
}

int run_gen_trace(int hours, int farms, std::uint64_t seed, double capacity, const std::string& out) {
  const auto trace = rd::experiments::generate_synthetic_trace(hours, farms, seed, capacity);
  const std::string csv = rd::experiments::trace_to_csv(trace);
  if (out.empty())
    std::cout << csv;
  else
    write_file(out, csv);
  return kOk;
}

int run_convert(const std::string& case_path, const std::vector<int>& wind_buses, double capacity,
                const std::string& out) {
  std::vector<std::string> notes;
  auto grid = rd::grid::load_case_file(case_path, &notes);
  print_notes(notes);
  if (!wind_buses.empty()) grid = rd::grid::add_wind_farms(grid, wind_buses, capacity);
  const std::string text = rd::grid::serialize_case(grid);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-limited economic dispatch with scenario-based wind reserves"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Sample scenarios, build the reserve vector, and solve one dispatch");
  cmd_solve->add_option("--case", solve.case_path, "Case file (native TOML or MATPOWER .m)")->required();
  cmd_solve->add_option("--scenario", solve.scenario, "low-wind, high-wind, trace-hour:T, or comma-separated MW");
  cmd_solve->add_option("--alpha", solve.alpha, "Risk level in (0,1)")->required();
  cmd_solve->add_option("--samples", solve.samples, "Scheduling sample count");
  cmd_solve->add_option("--seed", solve.seed, "Random seed");
  cmd_solve->add_option("--method", solve.method, "order-statistic, min, or min-plus-delta");
  cmd_solve->add_option("--delta", solve.delta, "Uniform boost for min-plus-delta (MW)");
  cmd_solve->add_option("--beta", solve.beta, "Load scaling factor");
  cmd_solve->add_option("--mean-scale", solve.mean_scale, "Multiplier on the forecast mean");
  cmd_solve->add_option("--trace", solve.trace_path, "Historical trace CSV (default: synthetic)");
  cmd_solve->add_flag("--trace-mw", solve.trace_mw, "Trace values are MW rather than normalized");
  cmd_solve->add_option("--synthetic-hours", solve.synthetic_hours, "Length of the synthetic trace");
  cmd_solve->add_option("--synthetic-seed", solve.synthetic_seed, "Seed of the synthetic trace");
  cmd_solve->add_option("--wind-buses", solve.wind_buses, "Add wind farms at these buses")->delimiter(',');
  cmd_solve->add_option("--penetration", solve.penetration, "Wind share of installed capacity (0 keeps the case)");
  cmd_solve->add_flag("--clip", solve.clip, "Clip scenarios to [0, capacity]");
  cmd_solve->add_option("--trials", solve.trials, "Also validate the schedule with this many trials");
  cmd_solve->add_option("--jobs", solve.jobs, "Worker threads");
  cmd_solve->add_option("--tol", solve.tol, "Solver tolerance");
  cmd_solve->add_option("--out", solve.out_json, "Solution JSON (default: stdout)");
  cmd_solve->add_option("--lmp-csv", solve.lmp_csv, "Write per-bus LMPs");
  cmd_solve->add_option("--flow-csv", solve.flow_csv, "Write line flows");
  cmd_solve->add_option("--model-out", solve.model_out, "Write the forecast model JSON");

  std::string config_path;
  int sweep_jobs = 0;
  auto* cmd_sweep = app.add_subcommand("sweep", "Run the alpha and beta sweeps of a config file");
  cmd_sweep->add_option("--config", config_path, "Sweep config")->required();
  cmd_sweep->add_option("--jobs", sweep_jobs, "Override the config's worker count");

  std::string solution_path, model_path;
  long trials = rd::risk::kDefaultTrials;
  std::uint64_t validate_seed = 2013;
  double validate_alpha = 0.0;
  int validate_jobs = 1;
  auto* cmd_validate = app.add_subcommand("validate", "Monte Carlo risk of a solved schedule");
  cmd_validate->add_option("--solution", solution_path, "Solution JSON from solve")->required();
  cmd_validate->add_option("--model", model_path, "Forecast model JSON")->required();
  cmd_validate->add_option("--trials", trials, "Number of trials");
  cmd_validate->add_option("--seed", validate_seed, "Random seed");
  cmd_validate->add_option("--alpha", validate_alpha, "Risk target (default: the solution's alpha)");
  cmd_validate->add_option("--jobs", validate_jobs, "Worker threads");

  int hours = 589, farms = 7;
  std::uint64_t trace_seed = 7;
  double capacity = 1.0;
  std::string trace_out;
  auto* cmd_trace = app.add_subcommand("gen-trace", "Write a synthetic hourly wind trace as CSV");
  cmd_trace->add_option("--hours", hours, "Number of hours")->required();
  cmd_trace->add_option("--farms", farms, "Number of farms")->required();
  cmd_trace->add_option("--seed", trace_seed, "Random seed")->required();
  cmd_trace->add_option("--capacity", capacity, "Per-farm capacity (1 gives normalized output)");
  cmd_trace->add_option("--out", trace_out, "Output file (default: stdout)");

  std::string convert_case, convert_out;
  std::vector<int> convert_buses;
  double convert_capacity = 1.0;
  auto* cmd_convert = app.add_subcommand("convert", "Rewrite a case file in the native format");
  cmd_convert->add_option("--case", convert_case, "Input case (native or MATPOWER)")->required();
  cmd_convert->add_option("--wind-buses", convert_buses, "Add wind farms at these buses")->delimiter(',');
  cmd_convert->add_option("--capacity", convert_capacity, "Capacity of each added farm (MW)");
  cmd_convert->add_option("--out", convert_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_sweep->parsed()) return run_sweep(config_path, sweep_jobs);
    if (cmd_validate->parsed())
      return run_validate(solution_path, model_path, trials, validate_seed, validate_alpha, validate_jobs);
    if (cmd_trace->parsed()) return run_gen_trace(hours, farms, trace_seed, capacity, trace_out);
    if (cmd_convert->parsed()) return run_convert(convert_case, convert_buses, convert_capacity, convert_out);
  } catch (const rd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case rd::ErrorKind::infeasible: return kInfeasible;
      case rd::ErrorKind::solver: return kSolver;
      case rd::ErrorKind::parse:
      case rd::ErrorKind::validation: return kInput;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
