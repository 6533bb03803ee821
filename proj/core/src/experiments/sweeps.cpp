#include "riskdispatch/experiments/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "riskdispatch/error.hpp"
#include "riskdispatch/grid/case_io.hpp"
#include "riskdispatch/random.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace riskdispatch::experiments {

using toml::format_number;

namespace {

// fn(i) must not throw.
template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> workers;
  const int count = std::min(jobs, n);
  workers.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string join_lines(const std::vector<int>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(lines[i] + 1);
  }
  return out;
}

qp::SolverOptions solver_options(const ExperimentConfig& config) {
  qp::SolverOptions opts;
  opts.tol = config.solver_tol;
  return opts;
}

}  // namespace

Eigen::VectorXd scenario_mean(std::string_view spec, const WindTrace& trace_mw) {
  auto from = [](const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); };
  if (spec == "low-wind") return from(kLowWindMean);
  if (spec == "high-wind") return from(kHighWindMean);
  constexpr std::string_view hour_prefix = "trace-hour:";
  if (spec.starts_with(hour_prefix)) {
    const std::string digits(spec.substr(hour_prefix.size()));
    int t = -1;
    try {
      std::size_t used = 0;
      t = std::stoi(digits, &used);
      if (used != digits.size()) t = -1;
    } catch (const std::exception&) {
      t = -1;
    }
    if (t < 0) throw ValidationError("scenario: bad hour in '" + std::string(spec) + "'");
    if (t >= trace_mw.hours())
      throw ValidationError("scenario: trace has " + std::to_string(trace_mw.hours()) + " complete rows, hour " +
                            std::to_string(t) + " requested");
    return trace_mw.values.row(t).transpose();
  }
  // Explicit comma-separated vector.
  std::vector<double> values;
  std::size_t pos = 0;
  const std::string text(spec);
  while (pos <= text.size() && !text.empty()) {
    const auto comma = text.find(',', pos);
    const std::string cell = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ValidationError("unknown scenario '" + text + "' (expected low-wind, high-wind, trace-hour:t, or a vector)");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.empty()) throw ValidationError("unknown scenario ''");
  return from(values);
}

WindTrace trace_in_mw(const WindTrace& trace, const grid::GridCase& grid, bool normalized) {
  if (trace.farms() != static_cast<int>(grid.wind_farms.size()))
    throw ValidationError("trace has " + std::to_string(trace.farms()) + " farm columns, case has " +
                          std::to_string(grid.wind_farms.size()) + " wind farms");
  WindTrace out = trace;
  if (normalized)
    for (int j = 0; j < trace.farms(); ++j) out.values.col(j) *= grid.wind_farms[static_cast<std::size_t>(j)].capacity_mw;
  return out;
}

scenario::ForecastModel make_scenario(const ExperimentConfig& config, const WindTrace& trace_mw,
                                      std::vector<std::string>* warnings) {
  if (trace_mw.hours() < 2) throw ValidationError("trace shorter than 2 rows");
  Eigen::VectorXd mean;
  if (!config.scenario_vector.empty())
    mean = Eigen::Map<const Eigen::VectorXd>(config.scenario_vector.data(),
                                             static_cast<Eigen::Index>(config.scenario_vector.size()));
  else
    mean = scenario_mean(config.scenario, trace_mw);
  if (mean.size() != trace_mw.farms())
    throw ValidationError("scenario mean has " + std::to_string(mean.size()) + " entries, trace has " +
                          std::to_string(trace_mw.farms()) + " farms");
  mean *= config.mean_scale;
  const Eigen::MatrixXd cov = scenario::estimate_covariance(trace_mw.values, warnings);
  std::vector<int> order(static_cast<std::size_t>(mean.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  return scenario::ForecastModel::create(std::move(mean), cov, std::move(order));
}

ExperimentSetup prepare_experiment(const ExperimentConfig& config) {
  check(config);
  ExperimentSetup setup;
  setup.grid = grid::load_case_file(config.case_path, &setup.notes);
  if (!config.wind_buses.empty()) {
    if (!setup.grid.wind_farms.empty()) throw ValidationError("wind_buses given but the case already has wind farms");
    setup.grid = grid::add_wind_farms(setup.grid, config.wind_buses, 1.0);
  }
  if (config.penetration > 0.0)
    setup.grid = grid::scale_for_penetration(setup.grid, config.conventional_scale, config.penetration);
  if (setup.grid.wind_farms.empty()) throw ValidationError("case has no wind farms");
  setup.model = grid::build_dc_model(setup.grid);

  WindTrace raw;
  bool normalized = config.trace_normalized;
  if (config.trace_path) {
    raw = load_trace_file(*config.trace_path);
  } else {
    raw = generate_synthetic_trace(config.synthetic_hours, static_cast<int>(setup.grid.wind_farms.size()),
                                   config.synthetic_seed);
    normalized = true;
  }
  setup.dropped_trace_rows = drop_incomplete_rows(raw);
  if (setup.dropped_trace_rows > 0)
    setup.notes.push_back("dropped " + std::to_string(setup.dropped_trace_rows) + " trace rows with missing entries");
  setup.trace_mw = trace_in_mw(raw, setup.grid, normalized);
  setup.forecast = make_scenario(config, setup.trace_mw, &setup.notes);

  scenario::SampleOptions opts;
  opts.jobs = config.jobs;
  if (config.clip_to_capacity) {
    Eigen::VectorXd cap(static_cast<Eigen::Index>(setup.grid.wind_farms.size()));
    for (Eigen::Index j = 0; j < cap.size(); ++j) cap(j) = setup.grid.wind_farms[static_cast<std::size_t>(j)].capacity_mw;
    opts.clip_capacity = cap;
  }
  setup.scenarios = scenario::sample(setup.forecast, config.samples, config.seed, opts);
  return setup;
}

std::vector<AlphaRow> run_alpha_sweep(const ExperimentConfig& config, const ExperimentSetup& setup) {
  const std::vector<double> alphas = sorted_unique(config.alpha_list);
  std::vector<AlphaRow> rows(alphas.size());
  std::vector<std::exception_ptr> errors(alphas.size());
  const auto opts = solver_options(config);

  parallel_for(static_cast<int>(alphas.size()), config.jobs, [&](int i) {
    try {
      AlphaRow& row = rows[static_cast<std::size_t>(i)];
      row.alpha = alphas[static_cast<std::size_t>(i)];
      row.reserve = scenario::reserve_order_statistic(setup.scenarios, row.alpha);
      const auto problem = dispatch::DispatchProblem::create(setup.grid, setup.model, row.reserve);
      row.solution = dispatch::solve_dispatch(problem, opts);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("alpha " + format_number(alphas[i]) + ": " + e.what());
    } catch (const SolverError& e) {
      throw SolverError("alpha " + format_number(alphas[i]) + ": " + e.what());
    }
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = rows[i - 1].solution.objective;
    const double cur = rows[i].solution.objective;
    if (cur > prev + 1e-7)
      throw SolverError("objective rose from " + format_number(prev) + " to " + format_number(cur) + " between alpha " +
                        format_number(rows[i - 1].alpha) + " and " + format_number(rows[i].alpha));
  }

  if (config.validate_risk) {
    if (config.n_trials > std::numeric_limits<int>::max()) throw ValidationError("trials too large");
    // One set of validation draws, shared by every alpha.
    const Eigen::MatrixXd trials = scenario::draw_gaussian_rows(
        setup.forecast, static_cast<int>(config.n_trials), config.seed, seed_domain::validation, config.jobs);
    for (auto& row : rows) row.risk = risk::evaluate_risk(row.solution.w, trials, row.alpha);
  }
  return rows;
}

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::optimal: return "optimal";
    case CellStatus::infeasible: return "infeasible";
    case CellStatus::solver_failure: return "solver-failure";
  }
  return "unknown";
}

std::vector<BetaCell> run_beta_sweep(const ExperimentConfig& config, const ExperimentSetup& setup) {
  const std::vector<double> alphas = sorted_unique(config.alpha_list);
  const std::vector<double> betas = sorted_unique(config.beta_list);
  std::vector<BetaCell> cells(alphas.size() * betas.size());
  if (cells.empty()) return cells;

  std::vector<scenario::ReserveVector> reserves;
  for (double a : alphas) reserves.push_back(scenario::reserve_order_statistic(setup.scenarios, a));
  const auto opts = solver_options(config);

  parallel_for(static_cast<int>(cells.size()), config.jobs, [&](int k) {
    const std::size_t ia = static_cast<std::size_t>(k) / betas.size();
    const std::size_t ib = static_cast<std::size_t>(k) % betas.size();
    BetaCell& cell = cells[static_cast<std::size_t>(k)];
    cell.alpha = alphas[ia];
    cell.beta = betas[ib];
    try {
      auto scaled = grid::scale_loads(setup.grid, cell.beta);
      const auto problem = dispatch::DispatchProblem::create(std::move(scaled), setup.model, reserves[ia]);
      cell.solution = dispatch::solve_dispatch(problem, opts);
      cell.status = CellStatus::optimal;
    } catch (const InfeasibleError& e) {
      cell.status = CellStatus::infeasible;
      cell.diagnosis = e.what();
    } catch (const std::exception& e) {
      cell.status = CellStatus::solver_failure;
      cell.diagnosis = e.what();
    }
  });
  return cells;
}

LmpSummary summarize_lmp(const Eigen::VectorXd& lmp) {
  if (lmp.size() == 0) return {};
  return {lmp.minCoeff(), lmp.mean(), lmp.maxCoeff()};
}

std::string alpha_sweep_csv(const ExperimentSetup& setup, const std::vector<AlphaRow>& rows) {
  (void)setup;
  std::ostringstream out;
  out << "alpha,objective,lmp_min,lmp_mean,lmp_max,binding_lines,wind_mw,reserve_mw,empirical_risk,ci_halfwidth,"
         "risk_pass\n";
  for (const auto& row : rows) {
    const auto s = summarize_lmp(row.solution.lmp);
    out << format_number(row.alpha) << ',' << format_number(row.solution.objective) << ',' << format_number(s.min)
        << ',' << format_number(s.mean) << ',' << format_number(s.max) << ',' << join_lines(row.solution.binding_lines)
        << ',' << format_number(row.solution.w.sum()) << ',' << format_number(row.reserve.z_res.sum()) << ',';
    if (row.risk)
      out << format_number(row.risk->empirical_risk) << ',' << format_number(row.risk->ci_halfwidth) << ','
          << (row.risk->pass ? 1 : 0);
    else
      out << ",,";
    out << '\n';
  }
  return out.str();
}

std::string reserves_csv(const ExperimentSetup& setup, const std::vector<AlphaRow>& rows) {
  std::ostringstream out;
  out << "alpha,farm,bus,capacity_mw,mean_mw,z_res_mw,w_mw\n";
  for (const auto& row : rows)
    for (std::size_t f = 0; f < setup.grid.wind_farms.size(); ++f) {
      const auto& farm = setup.grid.wind_farms[f];
      const auto j = static_cast<Eigen::Index>(f);
      out << format_number(row.alpha) << ',' << f + 1 << ','
          << setup.grid.buses[static_cast<std::size_t>(farm.bus)].id << ',' << format_number(farm.capacity_mw) << ','
          << format_number(setup.forecast.mean()(j)) << ',' << format_number(row.reserve.z_res(j)) << ','
          << format_number(row.solution.w(j)) << '\n';
    }
  return out.str();
}

std::string beta_sweep_csv(const std::vector<BetaCell>& cells) {
  std::ostringstream out;
  out << "alpha,beta,status,objective,lmp_min,lmp_mean,lmp_max,binding_lines,diagnosis\n";
  for (const auto& cell : cells) {
    out << format_number(cell.alpha) << ',' << format_number(cell.beta) << ',' << to_string(cell.status) << ',';
    if (cell.solution) {
      const auto s = summarize_lmp(cell.solution->lmp);
      out << format_number(cell.solution->objective) << ',' << format_number(s.min) << ',' << format_number(s.mean)
          << ',' << format_number(s.max) << ',' << join_lines(cell.solution->binding_lines) << ',';
    } else {
      out << ",,,,,";
    }
    out << csv_quote(cell.diagnosis) << '\n';
  }
  return out.str();
}

std::string lmp_profiles_csv(const ExperimentSetup& setup, const std::vector<AlphaRow>& alpha_rows,
                             const std::vector<BetaCell>& beta_cells) {
  std::ostringstream out;
  out << "sweep,alpha,beta,bus,lmp\n";
  auto emit = [&](std::string_view sweep, double alpha, double beta, const Eigen::VectorXd& lmp) {
    for (Eigen::Index m = 0; m < lmp.size(); ++m)
      out << sweep << ',' << format_number(alpha) << ',' << format_number(beta) << ','
          << setup.grid.buses[static_cast<std::size_t>(m)].id << ',' << format_number(lmp(m)) << '\n';
  };
  for (const auto& row : alpha_rows) emit("alpha", row.alpha, 1.0, row.solution.lmp);
  for (const auto& cell : beta_cells)
    if (cell.solution) emit("beta", cell.alpha, cell.beta, cell.solution->lmp);
  return out.str();
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config, const ExperimentSetup& setup,
                                                 const std::vector<AlphaRow>& alpha_rows,
                                                 const std::vector<BetaCell>& beta_cells) {
  std::filesystem::create_directories(config.output_dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const char* name, const std::string& body) {
    const auto path = config.output_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << body;
    written.push_back(path);
  };
  if (!alpha_rows.empty()) {
    put("alpha_sweep.csv", alpha_sweep_csv(setup, alpha_rows));
    put("reserves.csv", reserves_csv(setup, alpha_rows));
  }
  if (!beta_cells.empty()) put("beta_sweep.csv", beta_sweep_csv(beta_cells));
  if (!alpha_rows.empty() || !beta_cells.empty())
    put("lmp_profiles.csv", lmp_profiles_csv(setup, alpha_rows, beta_cells));
  return written;
}

}  // namespace riskdispatch::experiments
