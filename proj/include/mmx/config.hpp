// Flat key-value experiment configuration.
//
// File format: one `key = value` per line; keys are dotted identifiers
// (e.g. "schedule.a"); values are JSON (numbers, booleans, quoted strings,
// lists). A value that does not parse as JSON is taken as a plain string, so
// `mode = lmo-po` and `mode = "lmo-po"` are equivalent. Everything after an
// unquoted `#` is a comment; blank lines are ignored. Overrides from the
// command line (--set key=value) use the same value syntax and replace file
// values.
#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmx/errors.hpp"

namespace mmx {

class Config {
 public:
  using Json = nlohmann::json;

  Config() = default;

  static Config parse(const std::string& text, const std::string& source) {
    Config config;
    std::istringstream in(text);
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      std::string trimmed = trim(strip_inline_comment(line));
      if (trimmed.empty()) continue;
      auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(source + ":" + std::to_string(line_number) +
                          ": expected 'key = value', got '" + trimmed + "'");
      }
      std::string key = trim(trimmed.substr(0, eq));
      std::string value = trim(trimmed.substr(eq + 1));
      if (!valid_key(key)) {
        throw ConfigError(source + ":" + std::to_string(line_number) +
                          ": invalid key '" + key + "'");
      }
      config.values_[key] = parse_value(value);
    }
    return config;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading config file: " + path);
    return parse(buffer.str(), path);
  }

  // Applies a single "key=value" override (the --set flag payload).
  void apply_override(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override must be key=value, got '" + assignment +
                        "'");
    }
    std::string key = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    if (!valid_key(key)) {
      throw ConfigError("override has invalid key '" + key + "'");
    }
    values_[key] = parse_value(value);
  }

  void set(const std::string& key, Json value) {
    values_[key] = std::move(value);
  }

  void erase(const std::string& key) { values_.erase(key); }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [key, value] : values_) out.push_back(key);
    return out;
  }

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_) {
      if (key.compare(0, prefix.size(), prefix) == 0) out.push_back(key);
    }
    return out;
  }

  const Json& raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      throw ConfigError("missing required config key '" + key + "'");
    }
    return it->second;
  }

  std::string get_string(const std::string& key) const {
    const Json& value = raw(key);
    if (!value.is_string()) {
      throw ConfigError("config key '" + key + "' expects a string");
    }
    return value.get<std::string>();
  }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_double(const std::string& key) const {
    const Json& value = raw(key);
    if (!value.is_number()) {
      throw ConfigError("config key '" + key + "' expects a number");
    }
    return value.get<double>();
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  long get_long(const std::string& key) const {
    const Json& value = raw(key);
    if (value.is_number_integer()) return value.get<long>();
    if (value.is_number_float()) {
      double d = value.get<double>();
      long rounded = static_cast<long>(d);
      if (static_cast<double>(rounded) == d) return rounded;
    }
    throw ConfigError("config key '" + key + "' expects an integer");
  }

  long get_long(const std::string& key, long fallback) const {
    return has(key) ? get_long(key) : fallback;
  }

  bool get_bool(const std::string& key) const {
    const Json& value = raw(key);
    if (!value.is_boolean()) {
      throw ConfigError("config key '" + key + "' expects true or false");
    }
    return value.get<bool>();
  }

  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
  }

  std::vector<double> get_double_list(const std::string& key) const {
    const Json& value = raw(key);
    if (!value.is_array()) {
      throw ConfigError("config key '" + key + "' expects a list");
    }
    std::vector<double> out;
    for (const Json& item : value) {
      if (!item.is_number()) {
        throw ConfigError("config key '" + key + "' expects numeric entries");
      }
      out.push_back(item.get<double>());
    }
    return out;
  }

  std::vector<long> get_long_list(const std::string& key) const {
    const Json& value = raw(key);
    if (!value.is_array()) {
      throw ConfigError("config key '" + key + "' expects a list");
    }
    std::vector<long> out;
    for (const Json& item : value) {
      if (!item.is_number_integer()) {
        throw ConfigError("config key '" + key +
                          "' expects integer entries");
      }
      out.push_back(item.get<long>());
    }
    return out;
  }

  // Flat JSON object mirroring the configuration, for echoing into
  // summary files.
  Json echo() const {
    Json object = Json::object();
    for (const auto& [key, value] : values_) object[key] = value;
    return object;
  }

 private:
  // Truncates at the first '#' that is not inside a double-quoted string.
  static std::string strip_inline_comment(const std::string& line) {
    bool in_quotes = false;
    bool escaped = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_quotes) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_quotes = false;
        }
      } else if (c == '"') {
        in_quotes = true;
      } else if (c == '#') {
        return line.substr(0, i);
      }
    }
    return line;
  }

  static std::string trim(const std::string& s) {
    auto begin = std::find_if_not(s.begin(), s.end(), [](unsigned char c) {
      return std::isspace(c);
    });
    auto end = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) {
                 return std::isspace(c);
               }).base();
    return (begin < end) ? std::string(begin, end) : std::string();
  }

  static bool valid_key(const std::string& key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') return false;
    bool prev_dot = false;
    for (char c : key) {
      if (c == '.') {
        if (prev_dot) return false;
        prev_dot = true;
        continue;
      }
      prev_dot = false;
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
          c != '-') {
        return false;
      }
    }
    return true;
  }

  static Json parse_value(const std::string& text) {
    if (text.empty()) return Json("");
    Json parsed = Json::parse(text, nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    return Json(text);  // bare-word string such as lmo-po
  }

  std::map<std::string, Json> values_;
};

}  // namespace mmx
