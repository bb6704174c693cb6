#pragma once

// Quadrature grids on CP^1 in the moment coordinate u = r^2 / (1 + r^2).
//
// The Fubini-Study volume form with total volume 1 is du * dtheta / (2 pi), so
// a radial grid is a Gauss-Legendre rule on u in [0, 1] and the full grid is
// the product of that rule with the trapezoid rule in the angle.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kquant {

enum class GridMode { radial, full2d };

inline std::string to_string(GridMode m) { return m == GridMode::radial ? "radial" : "full-2d"; }

inline GridMode grid_mode_from_string(const std::string& s) {
  if (s == "radial") return GridMode::radial;
  if (s == "full-2d" || s == "full2d" || s == "2d") return GridMode::full2d;
  throw std::invalid_argument("unknown grid mode '" + s + "'");
}

/// Gauss-Legendre nodes and weights on [0, 1] (weights sum to 1).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double wt = 1.0 / ((1.0 - z * z) * dp * dp);  // half of the [-1,1] weight
    x[i] = 0.5 * (1.0 - z);
    x[n - 1 - i] = 0.5 * (1.0 + z);
    w[i] = wt;
    w[n - 1 - i] = wt;
  }
  return {std::move(x), std::move(w)};
}

struct QuadGrid {
  GridMode mode = GridMode::radial;
  int resolution = 0;
  std::vector<double> u;      ///< moment coordinate of each node
  std::vector<double> theta;  ///< angle of each node (0 in radial mode)
  std::vector<double> weight; ///< weights of the base volume form, sum 1

  std::size_t size() const { return u.size(); }
  bool radial() const { return mode == GridMode::radial; }

  /// Chart coordinate z of node i.
  std::complex<double> z(std::size_t i) const {
    return std::polar(std::sqrt(u[i] / (1.0 - u[i])), theta[i]);
  }

  double integrate(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += weight[i] * f[i];
    return s;
  }
};

inline constexpr int kMinResolution = 8;

/// Radial mode: `resolution` Gauss-Legendre nodes in u.
/// Full mode: `resolution` nodes in u times 2*resolution angles.
inline QuadGrid build_grid(GridMode mode, int resolution) {
  if (resolution < kMinResolution)
    throw std::invalid_argument("build_grid: resolution " + std::to_string(resolution) +
                                " is below the minimum of " + std::to_string(kMinResolution));
  auto [x, w] = gauss_legendre(resolution);
  QuadGrid g;
  g.mode = mode;
  g.resolution = resolution;
  if (mode == GridMode::radial) {
    g.u = std::move(x);
    g.weight = std::move(w);
    g.theta.assign(g.u.size(), 0.0);
    return g;
  }
  const int na = 2 * resolution;
  g.u.reserve(std::size_t(resolution) * na);
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < na; ++j) {
      g.u.push_back(x[i]);
      g.theta.push_back(2.0 * std::numbers::pi * j / na);
      g.weight.push_back(w[i] / na);
    }
  return g;
}

}  // namespace kquant
