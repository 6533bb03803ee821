#include "riskdispatch/grid/case_io.hpp"

#include <fstream>
#include <sstream>

#include "riskdispatch/error.hpp"
#include "riskdispatch/toml_lite.hpp"

namespace riskdispatch::grid {

namespace {

// Stand-in rating for MATPOWER branches with RATE_A = 0 (unlimited).
constexpr double kUnlimitedRatingMw = 9999.0;

int resolve_bus(const GridCase& grid, long long external_id, const std::string& what) {
  const int index = grid.bus_index(static_cast<int>(external_id));
  if (index < 0)
    throw ValidationError("dangling bus reference: " + what + " refers to bus " + std::to_string(external_id) +
                          " which is not among the " + std::to_string(grid.num_buses()) + " buses");
  return index;
}

struct MatrixBlock {
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;
};

class MatpowerReader {
 public:
  explicit MatpowerReader(std::string_view text) : text_(text) {}

  double scalar(std::string_view name) const {
    const auto start = find_assignment(name);
    if (start == std::string_view::npos) throw ParseError("missing mpc." + std::string(name));
    const auto end = text_.find(';', start);
    std::string token(text_.substr(start, end - start));
    try {
      return std::stod(token);
    } catch (const std::exception&) {
      throw ParseError("invalid value for mpc." + std::string(name), line_of(start));
    }
  }

  bool has(std::string_view name) const { return find_assignment(name) != std::string_view::npos; }

  MatrixBlock matrix(std::string_view name) const {
    auto start = find_assignment(name);
    if (start == std::string_view::npos) throw ParseError("missing mpc." + std::string(name) + " block");
    if (text_[start] != '[') throw ParseError("mpc." + std::string(name) + " is not a matrix", line_of(start));
    ++start;
    MatrixBlock block;
    std::vector<double> row;
    int row_line = line_of(start);
    std::size_t pos = start;
    auto flush = [&] {
      if (!row.empty()) {
        block.rows.push_back(std::move(row));
        block.lines.push_back(row_line);
        row.clear();
      }
    };
    while (true) {
      if (pos >= text_.size()) throw ParseError("unterminated mpc." + std::string(name) + " block", row_line);
      const char ch = text_[pos];
      if (ch == ']') {
        flush();
        break;
      }
      if (ch == '%') {
        pos = text_.find('\n', pos);
        continue;
      }
      if (ch == ';' || ch == '\n') {
        flush();
        ++pos;
        row_line = line_of(pos);
        continue;
      }
      if (ch == ' ' || ch == '\t' || ch == ',' || ch == '\r') {
        ++pos;
        continue;
      }
      std::size_t end = pos;
      while (end < text_.size() && std::string_view(" \t,;\r\n]%").find(text_[end]) == std::string_view::npos) ++end;
      const std::string token(text_.substr(pos, end - pos));
      if (row.empty()) row_line = line_of(pos);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError("invalid number '" + token + "' in mpc." + std::string(name), line_of(pos));
      }
      pos = end;
    }
    return block;
  }

 private:
  std::size_t find_assignment(std::string_view name) const {
    const std::string key = "mpc." + std::string(name);
    std::size_t pos = 0;
    while ((pos = text_.find(key, pos)) != std::string_view::npos) {
      std::size_t after = pos + key.size();
      if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_')) {
        pos = after;
        continue;
      }
      while (after < text_.size() && (text_[after] == ' ' || text_[after] == '\t')) ++after;
      if (after < text_.size() && text_[after] == '=') {
        ++after;
        while (after < text_.size() && (text_[after] == ' ' || text_[after] == '\t')) ++after;
        return after;
      }
      pos = after;
    }
    return std::string_view::npos;
  }

  int line_of(std::size_t pos) const {
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + std::min(pos, text_.size()), '\n'));
  }

  std::string_view text_;
};

void require_columns(const MatrixBlock& block, std::size_t row, std::size_t columns, std::string_view name) {
  if (block.rows[row].size() < columns)
    throw ParseError("mpc." + std::string(name) + " row needs at least " + std::to_string(columns) + " columns",
                     block.lines[row]);
}

}  // namespace

GridCase parse_native_case(std::string_view text) {
  const toml::Document doc = toml::parse(text);
  GridCase grid;
  if (const auto* v = doc.root.find("base_mva")) grid.base_mva = v->as_number("base_mva");

  for (const auto& t : doc.array("bus")) {
    Bus bus;
    bus.id = static_cast<int>(t.at("id").as_integer("id"));
    if (const auto* v = t.find("load_mw")) bus.load_mw = v->as_number("load_mw");
    if (const auto* v = t.find("has_wind")) bus.has_wind = v->as_bool("has_wind");
    if (grid.bus_index(bus.id) >= 0) throw ParseError("duplicate bus id " + std::to_string(bus.id), t.line);
    grid.buses.push_back(bus);
  }
  if (grid.buses.empty()) throw ParseError("case defines no [[bus]] tables");

  int n = 0;
  for (const auto& t : doc.array("branch")) {
    ++n;
    const std::string what = "branch " + std::to_string(n) + " (line " + std::to_string(t.line) + ")";
    Branch br;
    br.from_bus = resolve_bus(grid, t.at("from_bus").as_integer("from_bus"), what);
    br.to_bus = resolve_bus(grid, t.at("to_bus").as_integer("to_bus"), what);
    br.reactance = t.at("reactance").as_number("reactance");
    br.flow_limit_mw = t.at("flow_limit_mw").as_number("flow_limit_mw");
    grid.branches.push_back(br);
  }

  n = 0;
  for (const auto& t : doc.array("generator")) {
    ++n;
    const std::string what = "generator " + std::to_string(n) + " (line " + std::to_string(t.line) + ")";
    Generator gen;
    gen.bus = resolve_bus(grid, t.at("bus").as_integer("bus"), what);
    if (const auto* v = t.find("p_min_mw")) gen.p_min_mw = v->as_number("p_min_mw");
    gen.p_max_mw = t.at("p_max_mw").as_number("p_max_mw");
    if (const auto* v = t.find("cost_c2")) gen.cost_c2 = v->as_number("cost_c2");
    if (const auto* v = t.find("cost_c1")) gen.cost_c1 = v->as_number("cost_c1");
    if (const auto* v = t.find("cost_c0")) gen.cost_c0 = v->as_number("cost_c0");
    grid.generators.push_back(gen);
  }

  n = 0;
  bool explicit_has_wind = false;
  for (const auto& t : doc.array("bus")) explicit_has_wind = explicit_has_wind || t.contains("has_wind");
  for (const auto& t : doc.array("wind_farm")) {
    ++n;
    const std::string what = "wind farm " + std::to_string(n) + " (line " + std::to_string(t.line) + ")";
    WindFarm farm;
    farm.bus = resolve_bus(grid, t.at("bus").as_integer("bus"), what);
    farm.capacity_mw = t.at("capacity_mw").as_number("capacity_mw");
    grid.wind_farms.push_back(farm);
    if (!explicit_has_wind) grid.buses[farm.bus].has_wind = true;
  }

  if (const auto* v = doc.root.find("ref_bus")) grid.ref_bus = resolve_bus(grid, v->as_integer("ref_bus"), "ref_bus");
  return grid;
}

GridCase parse_matpower_case(std::string_view text, std::vector<std::string>* warnings) {
  const MatpowerReader reader(text);
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  GridCase grid;
  if (reader.has("baseMVA")) grid.base_mva = reader.scalar("baseMVA");

  const MatrixBlock bus = reader.matrix("bus");
  bool shunts = false;
  for (std::size_t i = 0; i < bus.rows.size(); ++i) {
    require_columns(bus, i, 6, "bus");
    const auto& r = bus.rows[i];
    Bus b;
    b.id = static_cast<int>(r[0]);
    b.load_mw = r[2];
    if (r[4] != 0.0 || r[5] != 0.0) shunts = true;
    if (grid.bus_index(b.id) >= 0) throw ParseError("duplicate bus id " + std::to_string(b.id), bus.lines[i]);
    grid.buses.push_back(b);
  }
  if (shunts) warn("bus shunt terms (GS, BS) ignored by the DC model");

  const MatrixBlock branch = reader.matrix("branch");
  bool resistive = false;
  bool taps = false;
  int unlimited = 0;
  for (std::size_t i = 0; i < branch.rows.size(); ++i) {
    require_columns(branch, i, 6, "branch");
    const auto& r = branch.rows[i];
    if (r.size() > 10 && r[10] == 0.0) continue;
    const std::string what = "branch on line " + std::to_string(branch.lines[i]);
    Branch br;
    br.from_bus = resolve_bus(grid, static_cast<long long>(r[0]), what);
    br.to_bus = resolve_bus(grid, static_cast<long long>(r[1]), what);
    br.reactance = r[3];
    br.flow_limit_mw = r[5];
    if (br.flow_limit_mw == 0.0) {
      br.flow_limit_mw = kUnlimitedRatingMw;
      ++unlimited;
    }
    if (r[2] != 0.0 || r[4] != 0.0) resistive = true;
    if (r.size() > 9 && ((r[8] != 0.0 && r[8] != 1.0) || r[9] != 0.0)) taps = true;
    grid.branches.push_back(br);
  }
  if (resistive) warn("branch resistance and line charging ignored by the DC model");
  if (taps) warn("transformer taps and phase shifts ignored by the DC model");
  if (unlimited > 0)
    warn(std::to_string(unlimited) + " branch(es) with RATE_A = 0 given a " + toml::format_number(kUnlimitedRatingMw) +
         " MW rating");

  const MatrixBlock gen = reader.matrix("gen");
  const MatrixBlock cost = reader.matrix("gencost");
  if (cost.rows.size() < gen.rows.size())
    throw ParseError("mpc.gencost has fewer rows than mpc.gen", cost.lines.empty() ? 0 : cost.lines.back());
  if (cost.rows.size() > gen.rows.size()) warn("extra mpc.gencost rows (reactive costs) ignored");

  for (std::size_t i = 0; i < gen.rows.size(); ++i) {
    require_columns(gen, i, 10, "gen");
    const auto& r = gen.rows[i];
    if (r[7] <= 0.0) continue;
    Generator g;
    g.bus = resolve_bus(grid, static_cast<long long>(r[0]), "generator on line " + std::to_string(gen.lines[i]));
    g.p_max_mw = r[8];
    g.p_min_mw = r[9];

    require_columns(cost, i, 4, "gencost");
    const auto& c = cost.rows[i];
    if (c[0] != 2.0)
      throw ParseError("only polynomial cost model 2 is supported (piecewise-linear costs are not)", cost.lines[i]);
    const auto ncost = static_cast<std::size_t>(c[3]);
    if (ncost > 3) throw ParseError("cost polynomial degree above 2 is not supported", cost.lines[i]);
    require_columns(cost, i, 4 + ncost, "gencost");
    double coeff[3] = {0.0, 0.0, 0.0};  // c0, c1, c2
    for (std::size_t k = 0; k < ncost; ++k) coeff[ncost - 1 - k] = c[4 + k];
    g.cost_c0 = coeff[0];
    g.cost_c1 = coeff[1];
    g.cost_c2 = coeff[2];
    grid.generators.push_back(g);
  }
  return grid;
}

GridCase parse_case(std::string_view text, std::vector<std::string>* warnings) {
  GridCase grid = text.find("mpc.") != std::string_view::npos ? parse_matpower_case(text, warnings)
                                                               : parse_native_case(text);
  validate(grid);
  return grid;
}

std::string serialize_case(const GridCase& grid) {
  using toml::format_number;
  std::ostringstream out;
  out << "base_mva = " << format_number(grid.base_mva) << "\n";
  out << "ref_bus = " << grid.buses.at(grid.ref_bus).id << "\n";
  for (const auto& b : grid.buses) {
    out << "\n[[bus]]\nid = " << b.id << "\nload_mw = " << format_number(b.load_mw)
        << "\nhas_wind = " << (b.has_wind ? "true" : "false") << "\n";
  }
  for (const auto& br : grid.branches) {
    out << "\n[[branch]]\nfrom_bus = " << grid.buses[br.from_bus].id << "\nto_bus = " << grid.buses[br.to_bus].id
        << "\nreactance = " << format_number(br.reactance) << "\nflow_limit_mw = " << format_number(br.flow_limit_mw)
        << "\n";
  }
  for (const auto& g : grid.generators) {
    out << "\n[[generator]]\nbus = " << grid.buses[g.bus].id << "\np_min_mw = " << format_number(g.p_min_mw)
        << "\np_max_mw = " << format_number(g.p_max_mw) << "\ncost_c2 = " << format_number(g.cost_c2)
        << "\ncost_c1 = " << format_number(g.cost_c1) << "\ncost_c0 = " << format_number(g.cost_c0) << "\n";
  }
  for (const auto& f : grid.wind_farms) {
    out << "\n[[wind_farm]]\nbus = " << grid.buses[f.bus].id << "\ncapacity_mw = " << format_number(f.capacity_mw)
        << "\n";
  }
  return out.str();
}

GridCase load_case_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open case file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_case(buf.str(), warnings);
}

GridCase add_wind_farms(const GridCase& grid, const std::vector<int>& external_bus_ids, double capacity_mw) {
  GridCase out = grid;
  for (int id : external_bus_ids) {
    const int index = resolve_bus(out, id, "wind farm");
    out.wind_farms.push_back(WindFarm{index, capacity_mw});
    out.buses[index].has_wind = true;
  }
  validate(out);
  return out;
}

}  // namespace riskdispatch::grid
