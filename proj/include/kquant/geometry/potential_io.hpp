#pragma once

// Text formats for potentials.
//
//   coeffs c_0 c_1 ... c_M        phi = sum_m c_m u^m
//
//   samples <n>                   n values at the Chebyshev points
//   v_0 ... v_{n-1}               u_j = (1 - cos(pi (j + 1/2) / n)) / 2
//
// Values may span several lines; '#' starts a comment.

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/field.hpp"

namespace kquant {

/// Circle-invariant field given by Chebyshev coefficients in x = 2u - 1.
inline Field chebyshev_field(std::vector<double> a) {
  return Field::radial([a = std::move(a)](const auto& u) {
    using T = std::decay_t<decltype(u)>;
    const T x = 2.0 * u - 1.0;
    T b1(0.0), b2(0.0);
    for (std::size_t j = a.size(); j-- > 1;) {
      const T b0 = 2.0 * x * b1 - b2 + a[j];
      b2 = b1;
      b1 = b0;
    }
    return a.empty() ? T(0.0) : x * b1 - b2 + a[0];
  });
}

inline std::vector<double> chebyshev_points(int n) {
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / n));
  return u;
}

/// Interpolating Chebyshev coefficients from values at chebyshev_points(n).
inline std::vector<double> chebyshev_coefficients(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> a(n, 0.0);
  for (int m = 0; m < n; ++m) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += v[j] * std::cos(std::numbers::pi * m * (j + 0.5) / n);
    // x_j = -cos(...) so T_m(x_j) = (-1)^m cos(...)
    a[m] = (m % 2 ? -1.0 : 1.0) * s * (m == 0 ? 1.0 : 2.0) / n;
  }
  return a;
}

inline Potential read_potential(std::istream& is) {
  std::string line, tag;
  int lineno = 0, header_line = 0;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tag.empty()) {
        tag = tok;
        header_line = lineno;
        if (tag != "coeffs" && tag != "samples")
          throw ParseError("expected 'coeffs' or 'samples', got '" + tok + "'", lineno);
        continue;
      }
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("not a number: '" + tok + "'", lineno);
      }
    }
  }
  if (tag.empty()) throw ParseError("empty potential input");
  if (tag == "coeffs") {
    if (vals.empty()) throw ParseError("coeffs needs at least one value", header_line);
    return Field::polynomial(vals);
  }
  if (vals.empty() || vals[0] != std::floor(vals[0]) || vals[0] < 2)
    throw ParseError("samples needs a point count >= 2", header_line);
  const auto n = static_cast<std::size_t>(vals[0]);
  if (vals.size() - 1 != n)
    throw ParseError("samples declares " + std::to_string(n) + " values but has " + std::to_string(vals.size() - 1),
                     lineno);
  return chebyshev_field(chebyshev_coefficients({vals.begin() + 1, vals.end()}));
}

inline Potential load_potential(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open potential file '" + path + "'");
  return read_potential(f);
}

}  // namespace kquant
