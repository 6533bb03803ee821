#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace riskdispatch::grid {

/// Bus references in Branch, Generator and WindFarm are internal 0-based
/// indices into GridCase::buses; Bus::id keeps the external (file) id.
struct Bus {
  int id = 0;
  double load_mw = 0.0;
  bool has_wind = false;

  bool operator==(const Bus&) const = default;
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double reactance = 0.0;  // per-unit
  double flow_limit_mw = 0.0;

  bool operator==(const Branch&) const = default;
};

/// Quadratic cost C(p) = c2 p^2 + c1 p + c0 with p in MW, C in $/h.
struct Generator {
  int bus = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double cost_c2 = 0.0;
  double cost_c1 = 0.0;
  double cost_c0 = 0.0;

  double cost(double p_mw) const { return (cost_c2 * p_mw + cost_c1) * p_mw + cost_c0; }
  double marginal_cost(double p_mw) const { return 2.0 * cost_c2 * p_mw + cost_c1; }

  bool operator==(const Generator&) const = default;
};

struct WindFarm {
  int bus = 0;
  double capacity_mw = 0.0;

  bool operator==(const WindFarm&) const = default;
};

struct GridCase {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind_farms;
  double base_mva = 100.0;
  int ref_bus = 0;

  int num_buses() const { return static_cast<int>(buses.size()); }
  int num_branches() const { return static_cast<int>(branches.size()); }

  /// Internal index of an external bus id, or -1.
  int bus_index(int external_id) const;

  double total_load_mw() const;
  double conventional_capacity_mw() const;
  double wind_capacity_mw() const;

  bool operator==(const GridCase&) const = default;
};

/// Checks every GridCase invariant; throws ValidationError naming the first
/// violation (dangling bus reference, disconnected network, non-convex cost, ...).
void validate(const GridCase& grid);

/// True when every bus is reachable from bus 0 over branches.
bool is_connected(const GridCase& grid);

/// Conventional capacity multiplied by conventional_scale; the removed capacity
/// is handed to the wind farms in equal shares, so total installed capacity is
/// unchanged and wind holds `penetration` of it. Requires
/// conventional_scale + penetration == 1.
GridCase scale_for_penetration(const GridCase& grid, double conventional_scale, double penetration);

/// Every bus load multiplied by beta.
GridCase scale_loads(const GridCase& grid, double beta);

}  // namespace riskdispatch::grid
