#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "riskdispatch/grid/case.hpp"

namespace riskdispatch::grid {

/// Parses case text and validates the result. Text containing `mpc.` matrix
/// blocks goes through the MATPOWER-subset reader, anything else through the
/// native reader. Non-fatal notes (ignored resistance, shunts, ...) are
/// appended to `warnings` when given.
GridCase parse_case(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Native format: `base_mva`, optional `ref_bus` (external id), and
/// `[[bus]]`, `[[branch]]`, `[[generator]]`, `[[wind_farm]]` tables whose
/// keys match the struct fields. Bus references use external ids.
GridCase parse_native_case(std::string_view text);

/// Restricted MATPOWER reader: `mpc.baseMVA`, `mpc.bus`, `mpc.branch`,
/// `mpc.gen`, `mpc.gencost` (model 2, at most 3 coefficients). Wind farms are
/// not part of the format; attach them afterwards with add_wind_farms().
GridCase parse_matpower_case(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Native-format text; parse_native_case(serialize_case(c)) == c.
std::string serialize_case(const GridCase& grid);

/// Reads and parses a case file (either format).
GridCase load_case_file(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Adds one farm per listed external bus id, each with the given capacity.
GridCase add_wind_farms(const GridCase& grid, const std::vector<int>& external_bus_ids, double capacity_mw);

}  // namespace riskdispatch::grid
