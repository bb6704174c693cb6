#pragma once

// Experiment configuration: a flat "key = value" text file. Blank lines and
// '#' comments are ignored. Command-line flags override file keys.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/grid.hpp"

namespace kquant::lab {

/// Error in a configuration value; names the key and, for file input, the line.
struct ConfigError : ParseError {
  ConfigError(const std::string& key, const std::string& what, int line = 0)
      : ParseError("config key '" + key + "': " + what, line), key(key) {}
  std::string key;
};

enum class TwistKind { none, gradient };

struct ExperimentConfig {
  std::string experiment;
  std::vector<int> k_list{8, 16, 32, 64};
  GridMode grid_mode = GridMode::radial;
  int resolution = 256;
  int resolution_2d = 24;               ///< full-grid resolution for non-invariant trials
  std::vector<double> potential{0.0, 0.05, -0.03, 0.02, -0.01};
  std::string potential_file;           ///< overrides `potential` when set
  std::string group = "circle";
  TwistKind twist = TwistKind::gradient;
  double twist_strength = 1.0;          ///< Re of the rate of V = rate z d/dz
  std::optional<double> c0;             ///< empty: calibrate
  std::uint64_t seed = 20240611;
  int family_size = 10;
  int trials = 20;
  int max_iter = 200;
  double tol = 1e-8;
  std::string out = ".";
  std::string format = "csv";
};

inline constexpr int kMaxResolution = 4096;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double to_double(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'", line);
  }
}

inline long long to_integer(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'", line);
  }
}

}  // namespace detail

inline std::vector<int> parse_k_list(const std::string& v, int line = 0) {
  std::vector<int> ks;
  for (const auto& t : detail::split_list(v)) ks.push_back(static_cast<int>(detail::to_integer("k", t, line)));
  if (ks.empty()) throw ConfigError("k", "empty list", line);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1) throw ConfigError("k", "every k must be >= 1", line);
    if (i > 0 && ks[i] <= ks[i - 1]) throw ConfigError("k", "list must be strictly increasing", line);
  }
  return ks;
}

/// Applies one key to the config; unknown keys and bad values throw ConfigError.
inline void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value, int line = 0) {
  using detail::to_double;
  using detail::to_integer;
  if (key == "experiment") {
    c.experiment = value;
  } else if (key == "k") {
    c.k_list = parse_k_list(value, line);
  } else if (key == "grid") {
    try {
      c.grid_mode = grid_mode_from_string(value);
    } catch (const std::exception&) {
      throw ConfigError(key, "expected radial or full-2d, got '" + value + "'", line);
    }
  } else if (key == "resolution" || key == "resolution_2d") {
    const long long n = to_integer(key, value, line);
    if (n < kMinResolution || n > kMaxResolution)
      throw ConfigError(key, "must be in [" + std::to_string(kMinResolution) + ", " + std::to_string(kMaxResolution) + "]",
                        line);
    (key == "resolution" ? c.resolution : c.resolution_2d) = static_cast<int>(n);
  } else if (key == "potential") {
    std::vector<double> v;
    for (const auto& t : detail::split_list(value)) v.push_back(to_double(key, t, line));
    if (v.empty()) throw ConfigError(key, "empty coefficient list", line);
    c.potential = v;
  } else if (key == "potential_file") {
    c.potential_file = value;
  } else if (key == "group") {
    if (value != "trivial" && value != "circle") throw ConfigError(key, "expected trivial or circle", line);
    c.group = value;
  } else if (key == "twist") {
    if (value == "none")
      c.twist = TwistKind::none;
    else if (value == "gradient")
      c.twist = TwistKind::gradient;
    else
      throw ConfigError(key, "expected none or gradient", line);
  } else if (key == "twist_strength") {
    c.twist_strength = to_double(key, value, line);
    if (!(c.twist_strength > 0.0)) throw ConfigError(key, "must be positive", line);
  } else if (key == "c0") {
    if (value == "auto")
      c.c0.reset();
    else
      c.c0 = to_double(key, value, line);
  } else if (key == "seed") {
    const long long s = to_integer(key, value, line);
    if (s < 0) throw ConfigError(key, "must be non-negative", line);
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "family_size" || key == "trials" || key == "max_iter") {
    const long long n = to_integer(key, value, line);
    if (n < 1) throw ConfigError(key, "must be >= 1", line);
    (key == "family_size" ? c.family_size : key == "trials" ? c.trials : c.max_iter) = static_cast<int>(n);
  } else if (key == "tol") {
    c.tol = to_double(key, value, line);
    if (!(c.tol > 0.0)) throw ConfigError(key, "must be positive", line);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json" && value != "svg") throw ConfigError(key, "expected csv, json or svg", line);
    c.format = value;
  } else {
    throw ConfigError(key, "unknown key", line);
  }
}

inline ExperimentConfig parse_config(std::istream& is, ExperimentConfig c = {}) {
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const std::string s = detail::trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    const std::string key = detail::trim(s.substr(0, eq)), value = detail::trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line);
    set_config_value(c, key, value, line);
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig c = {}) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config file '" + path + "'");
  return parse_config(f, std::move(c));
}

}  // namespace kquant::lab
