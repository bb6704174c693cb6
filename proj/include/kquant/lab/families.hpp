#pragma once

// Seeded test potentials and the twist used by the experiments.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "kquant/geometry/automorphism.hpp"
#include "kquant/geometry/field.hpp"
#include "kquant/geometry/potential_io.hpp"
#include "kquant/lab/config.hpp"
#include "kquant/quantization/maps.hpp"

namespace kquant::lab {

/// Fixed bump used for reproducible single-potential runs.
inline const std::vector<double>& published_bump() {
  static const std::vector<double> c{0.0, 0.05, -0.03, 0.02, -0.01};
  return c;
}

inline Potential config_potential(const ExperimentConfig& c) {
  return c.potential_file.empty() ? Field::polynomial(c.potential) : load_potential(c.potential_file);
}

/// phi = sum_{m=1..4} c_m u^m with c_m uniform in [-amp, amp].
inline std::vector<Potential> radial_family(std::uint64_t seed, int n, double amp = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  std::vector<Potential> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> c{0.0};
    for (int m = 1; m <= 4; ++m) c.push_back(d(rng));
    out.push_back(Field::polynomial(c));
  }
  return out;
}

/// Non-invariant potentials: a radial part plus angular modes p = 1, 2,
///   sum_p Re(d_p e^{i p angle}) (u (1 - u))^{p/2} (1 + e_p u).
inline std::vector<Potential> plane_family(std::uint64_t seed, int n, double amp = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  std::vector<Potential> out;
  for (int i = 0; i < n; ++i) {
    const double c1 = d(rng), c2 = d(rng), c3 = d(rng);
    const double a1 = d(rng), b1 = d(rng), e1 = d(rng) / amp;
    const double a2 = 0.5 * d(rng), b2 = 0.5 * d(rng), e2 = d(rng) / amp;
    out.push_back(Field::general([=](const auto& u, const auto& t) {
      using std::cos;
      using std::sin;
      using std::sqrt;
      const auto q = u * (1.0 - u);
      return u * (c1 + u * (c2 + u * c3)) + (a1 * cos(t) + b1 * sin(t)) * sqrt(q) * (1.0 + e1 * u) +
             (a2 * cos(2.0 * t) + b2 * sin(2.0 * t)) * q * (1.0 + e2 * u);
    }));
  }
  return out;
}

inline VectorField twist_field(const ExperimentConfig& c) {
  return c.twist == TwistKind::none ? VectorField::zero() : VectorField{{c.twist_strength, 0.0}};
}

inline AutomorphismLift twist_for(int k, const ExperimentConfig& c, double c0) {
  const VectorField v = twist_field(c);
  return v.is_zero() ? AutomorphismLift::identity(k) : sigma_lift(v, k, 1.0, c0);
}

/// Value of c0 predicted by the conventions: k psi_k -> 2 c0 Re(rate) y + const,
/// and (theta + 2) / 2 has slope Re(rate) / (4 pi) in y.
inline double analytic_c0() { return 1.0 / (8.0 * std::numbers::pi); }

/// Weighted least-squares slope of k psi_k against theta at the nodes.
inline double psi_theta_slope(const Potential& phi, const GridPtr& grid, const VectorField& v, int k, double c0) {
  const MetricData md = metric_data(phi, grid, false);
  const PsiField p = psi_potential(sigma_lift(v, k, 1.0, c0), md);
  const auto th = md.sample(holomorphy_potential(v, phi, grid));
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < md.size(); ++i) {
    mx += md.mu[i] * th[i];
    my += md.mu[i] * k * p.values[i];
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < md.size(); ++i) {
    sxy += md.mu[i] * (th[i] - mx) * (k * p.values[i] - my);
    sxx += md.mu[i] * (th[i] - mx) * (th[i] - mx);
  }
  return sxy / sxx;
}

/// Chooses c0 so that k psi_k has slope 1/2 against theta at a large degree,
/// starting from c0 = 1 with no prior knowledge of the answer.
inline double calibrate_c0(const Potential& phi, const GridPtr& grid, const VectorField& v, int k_cal = 1024) {
  double c0 = 1.0;
  for (int it = 0; it < 20; ++it) {
    const double next = c0 * 0.5 / psi_theta_slope(phi, grid, v, k_cal, c0);
    if (std::abs(next - c0) <= 1e-14 * std::abs(c0)) return next;
    c0 = next;
  }
  return c0;
}

}  // namespace kquant::lab
