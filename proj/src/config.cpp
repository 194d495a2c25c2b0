#include "wentropy/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wentropy/error.hpp"

namespace wentropy::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("expected a number, got an empty string");
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("invalid number '" + std::string(text) + "'");
  }
  return value;
}

bool KeyedSpec::has(std::string_view key) const {
  return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
}

double KeyedSpec::number(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) {
      try {
        return parse_number(v);
      } catch (const ConfigError&) {
        throw ConfigError("'" + kind + "': parameter " + std::string(key) + "='" + v +
                          "' is not a number");
      }
    }
  }
  throw ConfigError("'" + kind + "': missing parameter " + std::string(key));
}

double KeyedSpec::number_or(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::string KeyedSpec::text_or(std::string_view key, std::string_view fallback) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::string(fallback);
}

void KeyedSpec::require_only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : entries) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("'" + kind + "': unknown parameter '" + k + "'");
    }
  }
}

KeyedSpec parse_keyed_spec(std::string_view text) {
  text = trim(text);
  KeyedSpec spec;
  const auto colon = text.find(':');
  spec.kind = std::string(trim(text.substr(0, colon)));
  if (spec.kind.empty()) throw ConfigError("empty specification string");
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) throw ConfigError("empty parameter in '" + std::string(text) + "'");
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("parameter '" + std::string(item) + "' in '" + std::string(text) +
                        "' is not of the form key=value");
    }
    std::string key(trim(item.substr(0, eq)));
    std::string value(trim(item.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ConfigError("malformed parameter '" + std::string(item) + "'");
    }
    if (spec.has(key)) throw ConfigError("duplicate parameter '" + key + "'");
    spec.entries.emplace_back(std::move(key), std::move(value));
  }
  return spec;
}

const std::string& Value::as_string() const {
  if (!is_string()) throw ConfigError("expected a string value");
  return std::get<std::string>(data);
}
double Value::as_number() const {
  if (!is_number()) throw ConfigError("expected a numeric value");
  return std::get<double>(data);
}
bool Value::as_bool() const {
  if (!is_bool()) throw ConfigError("expected a boolean value");
  return std::get<bool>(data);
}
const Array& Value::as_array() const {
  if (!is_array()) throw ConfigError("expected an array value");
  return std::get<Array>(data);
}
const Table& Value::as_table() const {
  if (!is_table()) throw ConfigError("expected a table value");
  return std::get<Table>(data);
}

namespace {

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : text_(text) {}

  Table parse() {
    Table root;
    Table* current = &root;
    while (!at_end()) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        current = parse_header(root);
      } else {
        parse_key_value(*current);
      }
      finish_line();
    }
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  void skip_comment() {
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  // Whitespace, newlines and comments, used inside arrays.
  void skip_all() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (!at_end() && peek() == '\n') {
        ++pos_;
        ++line_;
      } else {
        break;
      }
    }
  }

  void skip_blank_lines() { skip_all(); }

  void finish_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
    ++line_;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_key() {
    skip_spaces();
    if (!at_end() && (peek() == '"')) return parse_string();
    const auto start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> parts{parse_key()};
    skip_spaces();
    while (!at_end() && peek() == '.') {
      ++pos_;
      parts.push_back(parse_key());
      skip_spaces();
    }
    return parts;
  }

  Table* parse_header(Table& root) {
    expect('[');
    const bool array = !at_end() && peek() == '[';
    if (array) ++pos_;
    auto path = parse_dotted_key();
    expect(']');
    if (array) expect(']');

    Table* table = &root;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const bool last = i + 1 == path.size();
      auto it = table->find(path[i]);
      if (last && array) {
        if (it == table->end()) it = table->emplace(path[i], Value{Array{}}).first;
        if (!it->second.is_array()) fail("'" + path[i] + "' is not an array of tables");
        auto& arr = std::get<Array>(it->second.data);
        arr.push_back(Value{Table{}});
        return &std::get<Table>(arr.back().data);
      }
      if (it == table->end()) it = table->emplace(path[i], Value{Table{}}).first;
      if (it->second.is_array()) {
        auto& arr = std::get<Array>(it->second.data);
        if (arr.empty() || !arr.back().is_table()) fail("'" + path[i] + "' is not a table");
        table = &std::get<Table>(arr.back().data);
      } else if (it->second.is_table()) {
        table = &std::get<Table>(it->second.data);
      } else {
        fail("'" + path[i] + "' is not a table");
      }
    }
    return table;
  }

  void parse_key_value(Table& table) {
    auto path = parse_dotted_key();
    skip_spaces();
    expect('=');
    skip_spaces();
    Value value = parse_value();
    Table* target = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      auto it = target->find(path[i]);
      if (it == target->end()) it = target->emplace(path[i], Value{Table{}}).first;
      if (!it->second.is_table()) fail("'" + path[i] + "' is not a table");
      target = &std::get<Table>(it->second.data);
    }
    if (target->count(path.back()) != 0) fail("duplicate key '" + path.back() + "'");
    target->emplace(path.back(), std::move(value));
  }

  std::string parse_string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  Value parse_value() {
    if (at_end()) fail("expected a value");
    const char c = peek();
    if (c == '"') return Value{parse_string()};
    if (c == '[') {
      ++pos_;
      Array arr;
      skip_all();
      while (!at_end() && peek() != ']') {
        arr.push_back(parse_value());
        skip_all();
        if (!at_end() && peek() == ',') {
          ++pos_;
          skip_all();
        } else {
          break;
        }
      }
      expect(']');
      return Value{std::move(arr)};
    }
    if (c == '{') {
      ++pos_;
      Table tbl;
      skip_spaces();
      while (!at_end() && peek() != '}') {
        parse_key_value(tbl);
        skip_spaces();
        if (!at_end() && peek() == ',') {
          ++pos_;
          skip_spaces();
        } else {
          break;
        }
      }
      expect('}');
      return Value{std::move(tbl)};
    }
    const auto start = pos_;
    while (!at_end() && peek() != ',' && peek() != ']' && peek() != '}' && peek() != '\n' &&
           peek() != '#' && peek() != ' ' && peek() != '\t' && peek() != '\r') {
      ++pos_;
    }
    const std::string_view token = text_.substr(start, pos_ - start);
    if (token == "true") return Value{true};
    if (token == "false") return Value{false};
    std::string cleaned;
    for (char ch : token)
      if (ch != '_') cleaned += ch;
    try {
      return Value{parse_number(cleaned)};
    } catch (const ConfigError&) {
      fail("invalid value '" + std::string(token) + "'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

Table parse_toml(std::string_view text) { return TomlParser(text).parse(); }

Table parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

}  // namespace wentropy::config
