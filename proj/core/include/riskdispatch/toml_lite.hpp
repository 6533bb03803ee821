#pragma once

// Reader for the small TOML subset used by case and experiment files:
// `key = value` pairs, `[table]` and `[[array-of-tables]]` headers, `#`
// comments, and values that are numbers, booleans, basic strings, or
// (possibly multi-line, possibly nested) arrays.

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace riskdispatch::toml {

struct Value {
  using Array = std::vector<Value>;
  std::variant<double, bool, std::string, Array> data;
  int line = 0;

  double as_number(std::string_view key) const;
  long long as_integer(std::string_view key) const;
  bool as_bool(std::string_view key) const;
  const std::string& as_string(std::string_view key) const;
  const Array& as_array(std::string_view key) const;
  std::vector<double> as_number_list(std::string_view key) const;
};

struct Table {
  std::map<std::string, Value, std::less<>> entries;
  int line = 0;

  const Value* find(std::string_view key) const;
  /// Throws ParseError naming the key and the table's header line.
  const Value& at(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
};

struct Document {
  Table root;
  std::map<std::string, Table, std::less<>> tables;
  std::map<std::string, std::vector<Table>, std::less<>> arrays;

  const std::vector<Table>& array(std::string_view name) const;
  const Table* table(std::string_view name) const;
};

Document parse(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace riskdispatch::toml
