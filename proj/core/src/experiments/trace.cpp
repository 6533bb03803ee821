#include "riskdispatch/experiments/trace.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "riskdispatch/error.hpp"
#include "riskdispatch/random.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace riskdispatch::experiments {

namespace {

std::string hour_stamp(int hour_offset) {
  using namespace std::chrono;
  const sys_days start = year{2012} / May / 1;
  const auto t = start + hours{hour_offset};
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto hh = duration_cast<hours>(t - day).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(hh));
  return buf;
}

}  // namespace

WindTrace generate_synthetic_trace(int n_hours, int farms, std::uint64_t seed, double capacity,
                                   const SyntheticTraceParams& params) {
  if (n_hours < 2) throw ValidationError("synthetic trace needs at least 2 hours");
  if (farms < 1) throw ValidationError("synthetic trace needs at least 1 farm");
  if (!(capacity > 0.0)) throw ValidationError("synthetic trace capacity must be positive");

  Eigen::MatrixXd corr(farms, farms);
  for (int i = 0; i < farms; ++i)
    for (int j = 0; j < farms; ++j)
      corr(i, j) = i == j ? 1.0
                          : params.shared_correlation + (1.0 - params.shared_correlation) *
                                                            std::exp(-std::abs(i - j) / params.correlation_length);
  const Eigen::MatrixXd chol = corr.llt().matrixL();

  NormalStream normal(derive_seed(seed, seed_domain::synthetic_trace));
  // Per-farm offsets give the farms different typical output levels.
  Eigen::VectorXd offset(farms);
  for (int j = 0; j < farms; ++j) offset(j) = -0.4 + 0.5 * normal.next();

  const double phi = params.ar_coefficient;
  const double innovation = std::sqrt(1.0 - phi * phi);
  Eigen::VectorXd latent(farms), eps(farms);
  for (int j = 0; j < farms; ++j) eps(j) = normal.next();
  latent = chol * eps;

  WindTrace trace;
  trace.values.resize(n_hours, farms);
  trace.timestamps.reserve(static_cast<std::size_t>(n_hours));
  for (int t = 0; t < n_hours; ++t) {
    if (t > 0) {
      for (int j = 0; j < farms; ++j) eps(j) = normal.next();
      latent = phi * latent + innovation * (chol * eps);
    }
    for (int j = 0; j < farms; ++j) {
      const double z = offset(j) + params.latent_scale * latent(j);
      trace.values(t, j) = capacity / (1.0 + std::exp(-z));
    }
    trace.timestamps.push_back(hour_stamp(t));
  }

  // Blank one cell in a random ~2% of rows.
  for (int t = 0; t < n_hours; ++t) {
    const double u = normal.uniform_open();
    const double v = normal.uniform_open();
    if (u < params.missing_row_fraction) {
      const int j = std::min(farms - 1, static_cast<int>(v * farms));
      trace.values(t, j) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return trace;
}

std::string trace_to_csv(const WindTrace& trace) {
  std::ostringstream out;
  out << "timestamp";
  for (int j = 0; j < trace.farms(); ++j) out << ",farm" << j + 1;
  out << '\n';
  for (int t = 0; t < trace.hours(); ++t) {
    out << trace.timestamps[static_cast<std::size_t>(t)];
    for (int j = 0; j < trace.farms(); ++j) {
      out << ',';
      if (!std::isnan(trace.values(t, j))) out << toml::format_number(trace.values(t, j));
    }
    out << '\n';
  }
  return out.str();
}

WindTrace parse_trace_csv(std::string_view text) {
  std::vector<std::string> stamps;
  std::vector<std::vector<double>> rows;
  int columns = -1;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      cells.emplace_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (line_no == 1) {
      columns = static_cast<int>(cells.size()) - 1;
      if (columns < 1) throw ParseError("trace header needs a timestamp and at least one farm column", line_no);
      continue;
    }
    if (static_cast<int>(cells.size()) - 1 != columns)
      throw ParseError("expected " + std::to_string(columns + 1) + " cells", line_no);
    std::vector<double> row;
    for (int j = 1; j <= columns; ++j) {
      const std::string& cell = cells[static_cast<std::size_t>(j)];
      if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("invalid number '" + cell + "'", line_no);
      }
    }
    stamps.push_back(cells[0]);
    rows.push_back(std::move(row));
  }
  if (columns < 0) throw ParseError("trace file is empty");

  WindTrace trace;
  trace.timestamps = std::move(stamps);
  trace.values.resize(static_cast<Eigen::Index>(rows.size()), columns);
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (int j = 0; j < columns; ++j) trace.values(static_cast<Eigen::Index>(t), j) = rows[t][j];
  return trace;
}

WindTrace load_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open trace file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_csv(buf.str());
}

int drop_incomplete_rows(WindTrace& trace) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < trace.values.rows(); ++t)
    if (!trace.values.row(t).hasNaN()) keep.push_back(t);
  const int dropped = trace.hours() - static_cast<int>(keep.size());
  if (dropped == 0) return 0;
  WindTrace out;
  out.values.resize(static_cast<Eigen::Index>(keep.size()), trace.values.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.values.row(static_cast<Eigen::Index>(i)) = trace.values.row(keep[i]);
    out.timestamps.push_back(trace.timestamps[static_cast<std::size_t>(keep[i])]);
  }
  trace = std::move(out);
  return dropped;
}

}  // namespace riskdispatch::experiments
