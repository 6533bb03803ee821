#include "riskdispatch/grid/case.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "riskdispatch/error.hpp"

namespace riskdispatch::grid {

namespace {

std::string bus_label(const GridCase& grid, int index) {
  if (index >= 0 && index < grid.num_buses()) return std::to_string(grid.buses[index].id);
  return std::to_string(index);
}

void check_bus_ref(const GridCase& grid, int index, const std::string& what) {
  if (index < 0 || index >= grid.num_buses())
    throw ValidationError("dangling bus reference: " + what + " refers to bus index " + std::to_string(index) +
                          " of " + std::to_string(grid.num_buses()));
}

}  // namespace

int GridCase::bus_index(int external_id) const {
  for (int i = 0; i < num_buses(); ++i)
    if (buses[i].id == external_id) return i;
  return -1;
}

double GridCase::total_load_mw() const {
  return std::accumulate(buses.begin(), buses.end(), 0.0, [](double acc, const Bus& b) { return acc + b.load_mw; });
}

double GridCase::conventional_capacity_mw() const {
  return std::accumulate(generators.begin(), generators.end(), 0.0,
                         [](double acc, const Generator& g) { return acc + g.p_max_mw; });
}

double GridCase::wind_capacity_mw() const {
  return std::accumulate(wind_farms.begin(), wind_farms.end(), 0.0,
                         [](double acc, const WindFarm& w) { return acc + w.capacity_mw; });
}

bool is_connected(const GridCase& grid) {
  const int m = grid.num_buses();
  if (m == 0) return false;
  std::vector<std::vector<int>> adjacency(m);
  for (const auto& br : grid.branches) {
    if (br.from_bus < 0 || br.from_bus >= m || br.to_bus < 0 || br.to_bus >= m) continue;
    adjacency[br.from_bus].push_back(br.to_bus);
    adjacency[br.to_bus].push_back(br.from_bus);
  }
  std::vector<bool> seen(m, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == m;
}

void validate(const GridCase& grid) {
  if (grid.buses.empty()) throw ValidationError("case has no buses");
  if (!(grid.base_mva > 0.0) || !std::isfinite(grid.base_mva)) throw ValidationError("base_mva must be positive");
  check_bus_ref(grid, grid.ref_bus, "reference bus");

  std::set<int> ids;
  for (const auto& bus : grid.buses) {
    if (!ids.insert(bus.id).second) throw ValidationError("duplicate bus id " + std::to_string(bus.id));
    if (!std::isfinite(bus.load_mw) || bus.load_mw < 0.0)
      throw ValidationError("bus " + std::to_string(bus.id) + ": load_mw must be finite and non-negative");
  }

  for (std::size_t l = 0; l < grid.branches.size(); ++l) {
    const auto& br = grid.branches[l];
    const std::string what = "branch " + std::to_string(l + 1);
    check_bus_ref(grid, br.from_bus, what);
    check_bus_ref(grid, br.to_bus, what);
    if (br.from_bus == br.to_bus) throw ValidationError(what + ": from_bus equals to_bus");
    if (!(br.reactance > 0.0) || !std::isfinite(br.reactance))
      throw ValidationError(what + ": reactance must be strictly positive");
    if (!(br.flow_limit_mw > 0.0) || !std::isfinite(br.flow_limit_mw))
      throw ValidationError(what + ": flow_limit_mw must be positive and finite");
  }

  for (std::size_t g = 0; g < grid.generators.size(); ++g) {
    const auto& gen = grid.generators[g];
    const std::string what = "generator " + std::to_string(g + 1);
    check_bus_ref(grid, gen.bus, what);
    if (!std::isfinite(gen.p_min_mw) || !std::isfinite(gen.p_max_mw) || gen.p_min_mw < 0.0 ||
        gen.p_min_mw > gen.p_max_mw)
      throw ValidationError(what + ": requires 0 <= p_min_mw <= p_max_mw");
    if (gen.cost_c2 < 0.0 || gen.cost_c1 < 0.0 || gen.cost_c0 < 0.0)
      throw ValidationError(what + ": non-convex cost (coefficients must be non-negative)");
    if (!(gen.marginal_cost(gen.p_min_mw) > 0.0))
      throw ValidationError(what + ": cost is not strictly increasing on [p_min, p_max]");
  }

  std::set<int> farm_buses;
  for (std::size_t f = 0; f < grid.wind_farms.size(); ++f) {
    const auto& farm = grid.wind_farms[f];
    const std::string what = "wind farm " + std::to_string(f + 1);
    check_bus_ref(grid, farm.bus, what);
    if (!farm_buses.insert(farm.bus).second)
      throw ValidationError(what + ": more than one wind farm at bus " + bus_label(grid, farm.bus));
    if (!(farm.capacity_mw > 0.0) || !std::isfinite(farm.capacity_mw))
      throw ValidationError(what + ": capacity_mw must be positive");
  }
  for (int i = 0; i < grid.num_buses(); ++i) {
    if (grid.buses[i].has_wind != farm_buses.contains(i))
      throw ValidationError("bus " + bus_label(grid, i) + ": has_wind disagrees with wind_farm list");
  }

  if (!is_connected(grid)) throw ValidationError("disconnected network: not every bus is reachable over branches");
}

GridCase scale_for_penetration(const GridCase& grid, double conventional_scale, double penetration) {
  if (!(conventional_scale > 0.0 && conventional_scale <= 1.0))
    throw ValidationError("conventional_scale must lie in (0, 1]");
  if (!(penetration > 0.0 && penetration < 1.0)) throw ValidationError("penetration must lie in (0, 1)");
  if (grid.wind_farms.empty()) throw ValidationError("penetration scaling requires at least one wind farm");
  if (std::abs(conventional_scale + penetration - 1.0) > 1e-9)
    throw ValidationError("penetration " + std::to_string(penetration) + " is inconsistent with conventional scale " +
                          std::to_string(conventional_scale) + ": installed capacity cannot stay fixed");

  const double installed = grid.conventional_capacity_mw();
  GridCase out = grid;
  for (auto& gen : out.generators) {
    gen.p_min_mw *= conventional_scale;
    gen.p_max_mw *= conventional_scale;
  }
  const double per_farm = penetration * installed / static_cast<double>(out.wind_farms.size());
  for (auto& farm : out.wind_farms) farm.capacity_mw = per_farm;
  return out;
}

GridCase scale_loads(const GridCase& grid, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("load scale must be positive");
  GridCase out = grid;
  for (auto& bus : out.buses) bus.load_mw *= beta;
  return out;
}

}  // namespace riskdispatch::grid
