#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace riskdispatch::experiments {

/// Sweep configuration. Relative paths are resolved against the directory of
/// the config file.
struct ExperimentConfig {
  std::filesystem::path case_path;
  // Wind farms to add (external bus ids) when the case file has none.
  // Their capacity is set by the penetration scaling below.
  std::vector<int> wind_buses;

  // Historical trace; a synthetic one is generated when no path is given.
  std::optional<std::filesystem::path> trace_path;
  bool trace_normalized = true;  // values in [0,1], scaled by farm capacity
  int synthetic_hours = 589;
  std::uint64_t synthetic_seed = 7;

  // Forecast mean: a tag (low-wind, high-wind, trace-hour:t) or an explicit
  // MW vector, which wins when non-empty.
  std::string scenario = "high-wind";
  std::vector<double> scenario_vector;
  double mean_scale = 1.0;

  std::vector<double> alpha_list{0.01, 0.03, 0.05, 0.1};
  std::vector<double> beta_list;

  int samples = 1000;
  long n_trials = 100000;
  bool validate_risk = true;
  std::uint64_t seed = 2013;
  bool clip_to_capacity = false;

  // penetration == 0 keeps the case as loaded.
  double conventional_scale = 0.8;
  double penetration = 0.2;

  double solver_tol = 1e-9;
  int jobs = 1;
  std::filesystem::path output_dir = "results";
};

/// Throws ValidationError on alpha outside (0,1), beta <= 0, and similar.
void check(const ExperimentConfig& config);

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace riskdispatch::experiments
