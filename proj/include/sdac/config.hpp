#pragma once

// Minimal key = value configuration reader.  One assignment per line,
// '#' starts a comment, values are scalars, names, or whitespace/comma
// separated numeric lists.  Unknown keys are rejected at the end of loading
// so typos cannot silently fall back to defaults.

#include "sdac/types.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace sdac {

class ConfigMap {
 public:
  static ConfigMap from_string(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      if (!cfg.values_.emplace(key, value).second)
        throw ConfigError("config: duplicate key '" + key + "'");
    }
    return cfg;
  }

  static ConfigMap from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return from_string(text.str());
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    consumed_.insert(key);
    return parse_double(key, it->second);
  }

  int get_int(const std::string& key, int fallback) const {
    const double d = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
      throw ConfigError("config: key '" + key + "' expects an integer");
    return i;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    consumed_.insert(key);
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean");
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    consumed_.insert(key);
    return it->second;
  }

  /// Fixed-length numeric list; commas and whitespace both separate entries.
  VecX get_vector(const std::string& key, int size, const VecX& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback.size() != size)
        throw ConfigError("config: key '" + key + "' has no default");
      return fallback;
    }
    consumed_.insert(key);
    std::string body = it->second;
    for (char& c : body)
      if (c == ',') c = ' ';
    std::istringstream in(body);
    VecX out(size);
    for (int i = 0; i < size; ++i) {
      std::string tok;
      if (!(in >> tok))
        throw ConfigError("config: key '" + key + "' expects " +
                          std::to_string(size) + " entries");
      out(i) = parse_double(key, tok);
    }
    std::string extra;
    if (in >> extra)
      throw ConfigError("config: key '" + key + "' expects exactly " +
                        std::to_string(size) + " entries");
    return out;
  }

  /// Throws if any key was never consumed by a getter; call once loading is
  /// complete to surface misspelled keys.
  void ensure_all_consumed() const {
    std::string leftover;
    for (const auto& [key, value] : values_) {
      if (consumed_.count(key)) continue;
      if (!leftover.empty()) leftover += ", ";
      leftover += key;
    }
    if (!leftover.empty())
      throw ConfigError("config: unknown key(s): " + leftover);
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  static double parse_double(const std::string& key, const std::string& tok) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + key + "' has non-numeric value '" + tok + "'");
    }
    if (pos != tok.size())
      throw ConfigError("config: key '" + key + "' has trailing junk in '" + tok + "'");
    return d;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace sdac
