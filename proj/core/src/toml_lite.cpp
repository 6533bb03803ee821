#include "riskdispatch/toml_lite.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "riskdispatch/error.hpp"

namespace riskdispatch::toml {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (ch == '#' && !in_string) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

int bracket_depth(std::string_view s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (in_string) continue;
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
  }
  return depth;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char ch : key) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '_' || ch == '-';
    if (!ok) return false;
  }
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

  Value parse_all() {
    Value v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      ++pos_;
  }

  Value parse_value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    const char ch = text_[pos_];
    if (ch == '"') return make(parse_string());
    if (ch == '[') return parse_array();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return make(true);
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return make(false);
    }
    return make(parse_number());
  }

  template <typename T>
  Value make(T&& v) {
    Value out;
    out.data = std::forward<T>(v);
    out.line = line_;
    return out;
  }

  std::string parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char ch = text_[pos_++];
      if (ch == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char esc = text_[pos_++];
        switch (esc) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: fail(std::string("unsupported escape \\") + esc);
        }
      }
      out.push_back(ch);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  double parse_number() {
    std::size_t end = pos_;
    while (end < text_.size() && std::string_view("+-0123456789.eE_").find(text_[end]) != std::string_view::npos)
      ++end;
    std::string token;
    for (std::size_t i = pos_; i < end; ++i)
      if (text_[i] != '_') token.push_back(text_[i]);
    if (token.empty()) fail("expected a value");
    const char* first = token.data();
    if (*first == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) fail("invalid number '" + token + "'");
    pos_ = end;
    return value;
  }

  Value parse_array() {
    ++pos_;
    Value::Array items;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return make(std::move(items));
    }
    while (true) {
      items.push_back(parse_value());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          break;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']' in array");
    }
    return make(std::move(items));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

std::string describe(std::string_view key, int line) {
  return "'" + std::string(key) + "'" + (line > 0 ? " (line " + std::to_string(line) + ")" : "");
}

}  // namespace

double Value::as_number(std::string_view key) const {
  if (const auto* d = std::get_if<double>(&data)) return *d;
  throw ParseError("expected a number for " + describe(key, 0), line);
}

long long Value::as_integer(std::string_view key) const {
  const double d = as_number(key);
  if (std::floor(d) != d || std::abs(d) > 9.0e15) throw ParseError("expected an integer for " + describe(key, 0), line);
  return static_cast<long long>(d);
}

bool Value::as_bool(std::string_view key) const {
  if (const auto* b = std::get_if<bool>(&data)) return *b;
  throw ParseError("expected a boolean for " + describe(key, 0), line);
}

const std::string& Value::as_string(std::string_view key) const {
  if (const auto* s = std::get_if<std::string>(&data)) return *s;
  throw ParseError("expected a string for " + describe(key, 0), line);
}

const Value::Array& Value::as_array(std::string_view key) const {
  if (const auto* a = std::get_if<Array>(&data)) return *a;
  throw ParseError("expected an array for " + describe(key, 0), line);
}

std::vector<double> Value::as_number_list(std::string_view key) const {
  std::vector<double> out;
  for (const auto& item : as_array(key)) out.push_back(item.as_number(key));
  return out;
}

const Value* Table::find(std::string_view key) const {
  const auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

const Value& Table::at(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw ParseError("missing required key '" + std::string(key) + "'", line);
}

const std::vector<Table>& Document::array(std::string_view name) const {
  static const std::vector<Table> empty;
  const auto it = arrays.find(name);
  return it == arrays.end() ? empty : it->second;
}

const Table* Document::table(std::string_view name) const {
  const auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

Document parse(std::string_view text) {
  Document doc;
  Table* current = &doc.root;

  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        lines.emplace_back(text.substr(start));
        break;
      }
      lines.emplace_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::string stripped = strip_comment(lines[i]);
    const std::string_view line = trim(stripped);
    if (line.empty()) continue;

    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) throw ParseError("malformed array-of-tables header", line_no);
      const std::string name(trim(line.substr(2, line.size() - 4)));
      if (!valid_key(name)) throw ParseError("invalid table name '" + name + "'", line_no);
      if (doc.tables.contains(name)) throw ParseError("'" + name + "' already defined as a table", line_no);
      auto& list = doc.arrays[name];
      list.emplace_back();
      list.back().line = line_no;
      current = &list.back();
      continue;
    }
    if (line.starts_with("[")) {
      if (!line.ends_with("]")) throw ParseError("malformed table header", line_no);
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(name)) throw ParseError("invalid table name '" + name + "'", line_no);
      if (doc.tables.contains(name) || doc.arrays.contains(name))
        throw ParseError("duplicate table '" + name + "'", line_no);
      current = &doc.tables[name];
      current->line = line_no;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) throw ParseError("invalid key '" + key + "'", line_no);
    std::string value_text(trim(line.substr(eq + 1)));
    while (bracket_depth(value_text) > 0) {
      if (++i >= lines.size()) throw ParseError("unterminated array for key '" + key + "'", line_no);
      value_text += '\n';
      value_text += strip_comment(lines[i]);
    }
    if (current->entries.contains(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    current->entries.emplace(key, ValueParser(value_text, line_no).parse_all());
  }
  return doc;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace riskdispatch::toml
