#include "riskdispatch/scenario/forecast_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskdispatch/error.hpp"

namespace riskdispatch::scenario {

using nlohmann::ordered_json;

std::string serialize_forecast(const ForecastModel& model) {
  const int w = model.dimension();
  ordered_json doc;
  doc["mean"] = std::vector<double>(model.mean().data(), model.mean().data() + w);
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(w) * w);
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) cov.push_back(model.covariance()(i, j));
  doc["covariance"] = cov;
  doc["farm_order"] = model.farm_order();
  return doc.dump(2) + "\n";
}

ForecastModel parse_forecast(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("forecast model JSON: ") + e.what());
  }
  try {
    const auto mean = doc.at("mean").get<std::vector<double>>();
    const auto cov = doc.at("covariance").get<std::vector<double>>();
    std::vector<int> order;
    if (doc.contains("farm_order")) order = doc["farm_order"].get<std::vector<int>>();
    const auto w = static_cast<Eigen::Index>(mean.size());
    if (static_cast<Eigen::Index>(cov.size()) != w * w)
      throw ParseError("forecast model: covariance must have " + std::to_string(w * w) + " entries");
    Eigen::MatrixXd c(w, w);
    for (Eigen::Index i = 0; i < w; ++i)
      for (Eigen::Index j = 0; j < w; ++j) c(i, j) = cov[static_cast<std::size_t>(i * w + j)];
    return ForecastModel::create(Eigen::Map<const Eigen::VectorXd>(mean.data(), w), c, std::move(order));
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("forecast model: ") + e.what());
  }
}

ForecastModel load_forecast_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open forecast model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_forecast(buf.str());
}

}  // namespace riskdispatch::scenario
