#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace riskdispatch::experiments {

/// Hourly farm outputs; NaN marks a missing cell.
struct WindTrace {
  std::vector<std::string> timestamps;
  Eigen::MatrixXd values;

  int hours() const { return static_cast<int>(values.rows()); }
  int farms() const { return static_cast<int>(values.cols()); }
};

struct SyntheticTraceParams {
  double ar_coefficient = 0.9;   // hour-to-hour persistence of the latent state
  double shared_correlation = 0.4;
  double correlation_length = 2.0;  // farms i, j: 0.4 + 0.6 exp(-|i-j| / length)
  double latent_scale = 1.6;
  double missing_row_fraction = 0.02;
};

/// Logit-Gaussian AR(1) series: a latent Gaussian AR(1) vector with
/// cross-farm correlation, pushed through a logistic map and scaled by
/// `capacity` (1 gives normalized output). About `missing_row_fraction` of the
/// rows get one blanked cell. Hourly timestamps start at 2012-05-01T00:00.
WindTrace generate_synthetic_trace(int n_hours, int farms, std::uint64_t seed, double capacity = 1.0,
                                   const SyntheticTraceParams& params = {});

/// CSV: `timestamp,farm1,...,farmW`; empty cells are missing.
std::string trace_to_csv(const WindTrace& trace);
WindTrace parse_trace_csv(std::string_view text);
WindTrace load_trace_file(const std::filesystem::path& path);

/// Drops rows with any missing cell; returns the number dropped.
int drop_incomplete_rows(WindTrace& trace);

}  // namespace riskdispatch::experiments
