#pragma once

// The quantized functionals:
//   I_k(H)      = log det H - log det Hilb_k(0)
//   dI_ks(phi)  = k int dphi (k e^psi + Delta e^psi) d mu_phi
//   I_ks(phi)   = path integral of dI_ks from 0 to phi
//   L_ks(phi)   = I_k(Hilb_k(phi)) + I_ks(phi)
//   Z_ks(H)     = I_ks(FS_k(H)) + I_k(H)
// All of them vanish at the base point phi = 0, H = Hilb_k(0).

#include <cmath>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/functionals/paths.hpp"
#include "kquant/geometry/automorphism.hpp"
#include "kquant/geometry/metric.hpp"
#include "kquant/quantization/balanced.hpp"
#include "kquant/quantization/maps.hpp"

namespace kquant {

inline double i_k(const HermForm& h) { return log_det_relative_to_base(h); }

namespace detail {

inline void check_degree(int k, const AutomorphismLift& s) {
  if (k != s.k) throw DomainError("automorphism lift degree " + std::to_string(s.k) + " does not match k = " + std::to_string(k));
}

}  // namespace detail

/// (k + Delta_phi) e^{psi_k(phi)} at the nodes.
inline std::vector<double> twisted_weight(const MetricData& md, const AutomorphismLift& sigma) {
  const PsiField p = psi_potential(sigma, md);
  const int k = sigma.k;
  std::vector<double> out(md.size());
  if (sigma.is_identity()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * std::exp(p.values[i]);
    return out;
  }
  const auto lap = md.laplacian(Field::map(p.psi, [](const auto& x) { return exp(x); }));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * std::exp(p.values[i]) + lap[i];
  return out;
}

inline double delta_i_sigma(const MetricData& md, const Field& dphi, int k, const AutomorphismLift& sigma) {
  detail::check_degree(k, sigma);
  const auto w = twisted_weight(md, sigma);
  const auto d = md.sample(dphi);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += md.mu[i] * d[i] * w[i];
  return k * s;
}

inline double delta_i_sigma(const Potential& phi, const Field& dphi, int k, const AutomorphismLift& sigma,
                            const GridPtr& grid) {
  return delta_i_sigma(metric_data(phi, grid, false), dphi, k, sigma);
}

/// dI_ks(phi_s)(phi_s') on one leg.
inline double path_slope(const PathLeg& leg, double s, int k, const AutomorphismLift& sigma, const GridPtr& grid) {
  return delta_i_sigma(leg.at(s), leg.velocity(s), k, sigma, grid);
}

/// Integral of dI_ks along the path.
inline double i_sigma_k(const PathInPotentials& path, int k, const AutomorphismLift& sigma, const GridPtr& grid,
                        int nodes = kPathNodes) {
  detail::check_degree(k, sigma);
  const auto [x, w] = gauss_legendre(nodes);
  double total = 0.0;
  for (const auto& leg : path.legs)
    for (int q = 0; q < nodes; ++q) total += w[q] * path_slope(leg, x[q], k, sigma, grid);
  return total;
}

/// I_ks(phi) along the straight path from 0.
inline double i_sigma_k(const Potential& phi, int k, const AutomorphismLift& sigma, const GridPtr& grid,
                        int nodes = kPathNodes) {
  return i_sigma_k(PathInPotentials::linear(Field::constant(0.0), phi), k, sigma, grid, nodes);
}

/// Second s-derivative of I_ks along a leg:
///   k int (phi'' - |d phi'|^2 / 2) (k + Delta) e^psi d mu.
inline double i_sigma_hessian(const PathLeg& leg, double s, int k, const AutomorphismLift& sigma,
                              const GridPtr& grid) {
  detail::check_degree(k, sigma);
  const MetricData md = metric_data(leg.at(s), grid, false);
  const Field v = leg.velocity(s);
  const auto w = twisted_weight(md, sigma);
  const auto a = md.sample(leg.acceleration(s));
  const auto g = md.grad_norm2(v);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += md.mu[i] * (a[i] - 0.5 * g[i]) * w[i];
  return k * total;
}

inline double l_sigma_k(const Potential& phi, int k, const AutomorphismLift& sigma, const GridPtr& grid) {
  return i_k(hilb(phi, k, grid)) + i_sigma_k(phi, k, sigma, grid);
}

inline double z_sigma_k(const HermForm& h, const AutomorphismLift& sigma, const GridPtr& grid) {
  return i_sigma_k(fs(h), h.k(), sigma, grid) + i_k(h);
}

}  // namespace kquant
