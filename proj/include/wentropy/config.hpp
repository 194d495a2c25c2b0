#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wentropy::config {

/// "kind:key=value,key=value" strings used for spaces, initial data,
/// engines and time grids.
struct KeyedSpec {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(std::string_view key) const;
  double number(std::string_view key) const;
  double number_or(std::string_view key, double fallback) const;
  std::string text_or(std::string_view key, std::string_view fallback) const;
  /// Throws unless every key is one of `allowed`.
  void require_only(std::initializer_list<std::string_view> allowed) const;
};

KeyedSpec parse_keyed_spec(std::string_view text);

/// Strict decimal/scientific number parsing; rejects trailing garbage.
double parse_number(std::string_view text);

// A small TOML subset: [table], [[array.of.tables]], key = value with
// strings, numbers, booleans, arrays and inline tables, '#' comments.
struct Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value, std::less<>>;

struct Value {
  std::variant<std::string, double, bool, Array, Table> data;

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
  bool is_table() const { return std::holds_alternative<Table>(data); }

  const std::string& as_string() const;
  double as_number() const;
  bool as_bool() const;
  const Array& as_array() const;
  const Table& as_table() const;
};

Table parse_toml(std::string_view text);
Table parse_toml_file(const std::string& path);

}  // namespace wentropy::config
