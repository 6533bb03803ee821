#include "riskdispatch/experiments/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "riskdispatch/error.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace riskdispatch::experiments {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

const std::set<std::string_view>& known_keys();

}  // namespace

void check(const ExperimentConfig& c) {
  if (c.case_path.empty()) throw ValidationError("config: case path is required");
  if (c.alpha_list.empty()) throw ValidationError("config: alpha list is empty");
  for (double a : c.alpha_list)
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("config: alpha " + toml::format_number(a) + " not in (0,1)");
  for (double b : c.beta_list)
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("config: beta " + toml::format_number(b) + " must be > 0");
  if (c.samples < 1) throw ValidationError("config: samples must be >= 1");
  if (c.validate_risk && c.n_trials < 1) throw ValidationError("config: trials must be >= 1");
  if (c.synthetic_hours < 2) throw ValidationError("config: synthetic trace needs at least 2 hours");
  if (!(c.mean_scale >= 0.0) || !std::isfinite(c.mean_scale)) throw ValidationError("config: mean_scale must be >= 0");
  if (c.jobs < 1) throw ValidationError("config: jobs must be >= 1");
  if (!(c.solver_tol > 0.0)) throw ValidationError("config: solver_tol must be positive");
  if (c.penetration != 0.0 && !(c.penetration > 0.0 && c.penetration < 1.0))
    throw ValidationError("config: penetration must be in (0,1), or 0 to keep the case as loaded");
  if (!c.wind_buses.empty() && c.penetration == 0.0)
    throw ValidationError("config: wind_buses needs a nonzero penetration to size the farms");
  for (double v : c.scenario_vector)
    if (!std::isfinite(v)) throw ValidationError("config: scenario vector entries must be finite");
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  const toml::Document doc = toml::parse(text);
  const toml::Table& root = doc.root;
  for (const auto& [key, value] : root.entries)
    if (!known_keys().contains(key)) throw ParseError("unknown config key '" + key + "'", value.line);

  ExperimentConfig c;
  c.case_path = resolve(base_dir, root.at("case").as_string("case"));
  if (const auto* v = root.find("wind_buses"))
    for (double id : v->as_number_list("wind_buses")) {
      if (id != std::floor(id)) throw ParseError("wind_buses entries must be integers", v->line);
      c.wind_buses.push_back(static_cast<int>(id));
    }
  if (const auto* v = root.find("trace")) c.trace_path = resolve(base_dir, v->as_string("trace"));
  if (const auto* v = root.find("trace_normalized")) c.trace_normalized = v->as_bool("trace_normalized");
  if (const auto* v = root.find("synthetic_hours")) c.synthetic_hours = static_cast<int>(v->as_integer("synthetic_hours"));
  if (const auto* v = root.find("synthetic_seed"))
    c.synthetic_seed = static_cast<std::uint64_t>(v->as_integer("synthetic_seed"));
  if (const auto* v = root.find("scenario")) {
    if (std::holds_alternative<toml::Value::Array>(v->data))
      c.scenario_vector = v->as_number_list("scenario");
    else
      c.scenario = v->as_string("scenario");
  }
  if (const auto* v = root.find("mean_scale")) c.mean_scale = v->as_number("mean_scale");
  if (const auto* v = root.find("alpha")) c.alpha_list = v->as_number_list("alpha");
  if (const auto* v = root.find("beta")) c.beta_list = v->as_number_list("beta");
  if (const auto* v = root.find("samples")) c.samples = static_cast<int>(v->as_integer("samples"));
  if (const auto* v = root.find("trials")) c.n_trials = static_cast<long>(v->as_integer("trials"));
  if (const auto* v = root.find("validate_risk")) c.validate_risk = v->as_bool("validate_risk");
  if (const auto* v = root.find("seed")) c.seed = static_cast<std::uint64_t>(v->as_integer("seed"));
  if (const auto* v = root.find("clip_to_capacity")) c.clip_to_capacity = v->as_bool("clip_to_capacity");
  if (const auto* v = root.find("conventional_scale")) c.conventional_scale = v->as_number("conventional_scale");
  if (const auto* v = root.find("penetration")) c.penetration = v->as_number("penetration");
  if (const auto* v = root.find("solver_tol")) c.solver_tol = v->as_number("solver_tol");
  if (const auto* v = root.find("jobs")) c.jobs = static_cast<int>(v->as_integer("jobs"));
  if (const auto* v = root.find("output_dir")) c.output_dir = resolve(base_dir, v->as_string("output_dir"));
  else c.output_dir = resolve(base_dir, c.output_dir.string());
  check(c);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

namespace {

const std::set<std::string_view>& known_keys() {
  static const std::set<std::string_view> keys{
      "case",        "wind_buses", "trace",     "trace_normalized", "synthetic_hours", "synthetic_seed",     "scenario",
      "mean_scale",  "alpha",     "beta",             "samples",         "trials",             "validate_risk",
      "seed",        "clip_to_capacity", "conventional_scale", "penetration", "solver_tol",    "jobs",
      "output_dir"};
  return keys;
}

}  // namespace

}  // namespace riskdispatch::experiments
