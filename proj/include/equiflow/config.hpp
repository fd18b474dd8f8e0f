#pragma once

// Flat key=value config files with dotted section prefixes, '#' comments.
// All type errors carry the file name and line number.

#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "equiflow/errors.hpp"
#include "equiflow/linalg.hpp"

namespace equiflow {

struct Config {
  std::string path;
  std::map<std::string, std::string> kv;
  std::map<std::string, int> line_of;

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  std::string where(const std::string& key) const {
    auto it = line_of.find(key);
    return path + (it == line_of.end()
                       ? ""
                       : ":" + std::to_string(it->second));
  }

  std::string get(const std::string& key, const std::string& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
  }

  std::string require(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError(path + ": missing required key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key, double def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
      throw ConfigError(where(key) + ": '" + it->second +
                        "' is not a number for key '" + key + "'");
    return v;
  }

  long long get_int(const std::string& key, long long def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    char* end = nullptr;
    long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
      throw ConfigError(where(key) + ": '" + it->second +
                        "' is not an integer for key '" + key + "'");
    return v;
  }

  bool get_bool(const std::string& key, bool def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    const std::string& s = it->second;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(where(key) + ": '" + s + "' is not a boolean for key '" +
                      key + "'");
  }

  // comma-separated list of numbers
  std::vector<double> get_list(const std::string& key) const {
    std::vector<double> out;
    auto it = kv.find(key);
    if (it == kv.end()) return out;
    const std::string& s = it->second;
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t comma = s.find(',', pos);
      std::string tok = s.substr(pos, comma == std::string::npos
                                          ? std::string::npos
                                          : comma - pos);
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str())
        throw ConfigError(where(key) + ": bad number list for key '" + key +
                          "'");
      out.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }
};

namespace detail {
inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

inline Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Config c;
  c.path = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    c.kv[key] = val;
    c.line_of[key] = lineno;
  }
  return c;
}

}  // namespace equiflow
