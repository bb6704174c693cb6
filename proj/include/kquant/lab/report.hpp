#pragma once

// Experiment reports: per-k series, power-law fits, verdicts, and their
// CSV / JSON / SVG renderings.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kquant/error.hpp"

namespace kquant::lab {

/// v ~ coeff * k^{-exponent}; `exact` marks a series that is zero to rounding.
struct PowerFit {
  double coeff = 0.0;
  double exponent = 0.0;
  double residual = 0.0;  ///< RMS of the natural-log residuals
  bool exact = false;
  int excluded = 0;       ///< non-positive values left out of the fit

  /// Fitted value at k (0 for an exact series).
  double predict(double k) const { return exact ? 0.0 : coeff * std::pow(k, -exponent); }

  friend bool operator==(const PowerFit&, const PowerFit&) = default;
};

/// Values at or below this are treated as exact zeros by fit_power_law.
inline constexpr double kExactFloor = 1e-12;

/// Least-squares fit of log v = log C - p log k over the positive values.
inline PowerFit fit_power_law(const std::vector<double>& k, const std::vector<double>& v) {
  if (k.size() != v.size()) throw DomainError("fit_power_law: size mismatch");
  PowerFit f;
  if (!v.empty() && std::all_of(v.begin(), v.end(), [](double x) { return std::abs(x) <= kExactFloor; })) {
    f.exact = true;
    f.exponent = std::numeric_limits<double>::infinity();
    return f;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0 && k[i] > 0.0) {
      x.push_back(std::log(k[i]));
      y.push_back(std::log(v[i]));
    } else {
      ++f.excluded;
    }
  }
  if (x.size() < 3) throw DomainError("fit_power_law: needs at least 3 positive values");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) rss += std::pow(y[i] - icpt - slope * x[i], 2);
  f.coeff = std::exp(icpt);
  f.exponent = -slope;
  f.residual = std::sqrt(rss / n);
  return f;
}

struct Series {
  std::string name;
  std::vector<double> k;
  std::vector<double> value;
  std::optional<PowerFit> fit;

  friend bool operator==(const Series&, const Series&) = default;
};

struct Verdict {
  std::string criterion;
  bool pass = false;
  std::string detail;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct Report {
  std::string experiment;
  std::vector<Series> series;   ///< series[0] is the primary series
  std::vector<Verdict> verdicts;
  std::map<std::string, std::string> environment;

  bool passed() const {
    return !verdicts.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }

  friend bool operator==(const Report&, const Report&) = default;
};

// ---------------------------------------------------------------- json

inline nlohmann::json to_json(const PowerFit& f) {
  return {{"coeff", f.coeff},
          {"exponent", f.exact ? nlohmann::json(nullptr) : nlohmann::json(f.exponent)},
          {"residual", f.residual},
          {"exact", f.exact},
          {"excluded", f.excluded}};
}

inline PowerFit power_fit_from_json(const nlohmann::json& j) {
  PowerFit f;
  f.coeff = j.at("coeff").get<double>();
  f.exact = j.at("exact").get<bool>();
  f.exponent = j.at("exponent").is_null() ? std::numeric_limits<double>::infinity() : j.at("exponent").get<double>();
  f.residual = j.at("residual").get<double>();
  f.excluded = j.at("excluded").get<int>();
  return f;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["passed"] = r.passed();
  j["series"] = nlohmann::json::array();
  for (const auto& s : r.series) {
    nlohmann::json js{{"name", s.name}, {"k", s.k}, {"value", s.value}};
    js["fit"] = s.fit ? to_json(*s.fit) : nlohmann::json(nullptr);
    j["series"].push_back(js);
  }
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back({{"criterion", v.criterion}, {"pass", v.pass}, {"detail", v.detail}});
  j["environment"] = r.environment;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.experiment = j.at("experiment").get<std::string>();
  for (const auto& js : j.at("series")) {
    Series s;
    s.name = js.at("name").get<std::string>();
    s.k = js.at("k").get<std::vector<double>>();
    s.value = js.at("value").get<std::vector<double>>();
    if (!js.at("fit").is_null()) s.fit = power_fit_from_json(js.at("fit"));
    r.series.push_back(std::move(s));
  }
  for (const auto& jv : j.at("verdicts"))
    r.verdicts.push_back({jv.at("criterion").get<std::string>(), jv.at("pass").get<bool>(), jv.at("detail").get<std::string>()});
  r.environment = j.at("environment").get<std::map<std::string, std::string>>();
  return r;
}

// ---------------------------------------------------------------- csv

inline constexpr const char* kCsvHeader = "experiment,k,value,fit_coeff,fit_exp,verdict";

/// One row per series point; auxiliary series are tagged "experiment:series".
inline void write_csv(std::ostream& os, const Report& r) {
  os << kCsvHeader << "\n" << std::setprecision(17);
  const std::string verdict = r.passed() ? "PASS" : "FAIL";
  for (std::size_t si = 0; si < r.series.size(); ++si) {
    const Series& s = r.series[si];
    const std::string tag = si == 0 ? r.experiment : r.experiment + ":" + s.name;
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      os << tag << "," << s.k[i] << "," << s.value[i] << ",";
      if (s.fit && !s.fit->exact)
        os << s.fit->coeff << "," << s.fit->exponent;
      else if (s.fit)
        os << "0,exact";
      else
        os << ",";
      os << "," << verdict << "\n";
    }
  }
}

// ---------------------------------------------------------------- svg

/// Log-log line plot with one polyline per series (|value|, zeros dropped).
inline void write_svg(std::ostream& os, const Report& r) {
  const double w = 640, h = 420, m = 60;
  double kmin = INFINITY, kmax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& s : r.series)
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      if (s.k[i] > 0) kmin = std::min(kmin, s.k[i]), kmax = std::max(kmax, s.k[i]);
      const double a = std::abs(s.value[i]);
      if (a > 0 && std::isfinite(a)) vmin = std::min(vmin, a), vmax = std::max(vmax, a);
    }
  if (!(kmax > kmin)) kmin = 1, kmax = 10;
  if (!(vmax > vmin)) vmin = vmin > 0 && std::isfinite(vmin) ? vmin / 10 : 1e-16, vmax = vmin * 100;
  const double lk0 = std::log10(kmin), lk1 = std::log10(kmax), lv0 = std::log10(vmin), lv1 = std::log10(vmax);
  auto px = [&](double k) { return m + (std::log10(k) - lk0) / (lk1 - lk0) * (w - 2 * m); };
  auto py = [&](double v) { return h - m - (std::log10(v) - lv0) / (lv1 - lv0) * (h - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<title>" << r.experiment << "</title>\n";
  os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\"" << h - 2 * m
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">k (log)</text>\n";
  os << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15," << h / 2
     << ")\" text-anchor=\"middle\">|value| (log)</text>\n";
  os << std::setprecision(6);
  for (std::size_t si = 0; si < r.series.size(); ++si) {
    const Series& s = r.series[si];
    os << "<polyline fill=\"none\" stroke=\"" << colors[si % 6] << "\" data-series=\"" << s.name << "\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      const double a = std::abs(s.value[i]);
      if (!(a > 0) || !std::isfinite(a) || !(s.k[i] > 0)) continue;
      os << (first ? "" : " ") << px(s.k[i]) << "," << py(a);
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << w - m + 5 << "\" y=\"" << m + 15 * (si + 1) << "\" fill=\"" << colors[si % 6]
       << "\" font-size=\"10\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
}

/// Writes <out>/<experiment>.<format>; returns the path.
inline std::string emit_report(const Report& r, const std::string& format, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path path = fs::path(out_dir) / (r.experiment + "." + format);
  std::ofstream f(path);
  if (!f) throw Error("cannot write report to '" + path.string() + "'");
  if (format == "csv")
    write_csv(f, r);
  else if (format == "json")
    f << to_json(r).dump(2) << "\n";
  else if (format == "svg")
    write_svg(f, r);
  else
    throw DomainError("unknown report format '" + format + "'");
  if (!f) throw Error("failed writing '" + path.string() + "'");
  return path.string();
}

}  // namespace kquant::lab
