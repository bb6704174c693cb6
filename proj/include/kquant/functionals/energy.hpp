#pragma once

// Calabi functional, reduced scalar curvature and the (modified) K-energy.
//
//   Ca(phi)   = int (S - Sbar)^2 d mu_phi
//   S^G       = S - Sbar - Pi^G(S)
//   E^G(phi)  = - int_0^1 int phi S^G(t phi) d mu_{t phi} dt
// E^G vanishes at phi = 0 and is a primitive of -S^G d mu_phi.

#include <cmath>
#include <string>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/functionals/paths.hpp"
#include "kquant/geometry/automorphism.hpp"
#include "kquant/geometry/metric.hpp"

namespace kquant {

inline double calabi(const MetricData& md) {
  double s = 0.0;
  for (std::size_t i = 0; i < md.size(); ++i) s += md.mu[i] * (md.scalar[i] - md.sbar) * (md.scalar[i] - md.sbar);
  return s;
}

inline double calabi(const Potential& phi, const GridPtr& grid) { return calabi(metric_data(phi, grid)); }

/// Compact group acting on the model: trivial, or the rotations z -> e^{it} z.
struct GroupSpec {
  enum class Kind { trivial, circle };
  Kind kind = Kind::trivial;

  static GroupSpec trivial() { return {Kind::trivial}; }
  static GroupSpec circle() { return {Kind::circle}; }

  /// Gradient field whose J-rotation generates the group.
  VectorField generator() const {
    return kind == Kind::circle ? VectorField::rotation_moment_gradient() : VectorField::zero();
  }
  int dimension() const { return kind == Kind::circle ? 1 : 0; }
};

inline std::string to_string(GroupSpec::Kind k) { return k == GroupSpec::Kind::circle ? "circle" : "trivial"; }

inline GroupSpec group_from_string(const std::string& s) {
  if (s == "trivial") return GroupSpec::trivial();
  if (s == "circle") return GroupSpec::circle();
  throw DomainError("unknown group '" + s + "' (expected trivial or circle)");
}

/// Normalized Killing potentials of G at phi, sampled at the nodes.
inline std::vector<std::vector<double>> killing_basis(const MetricData& md, const GroupSpec& g) {
  if (g.kind == GroupSpec::Kind::trivial) return {};
  if (!md.phi.invariant()) throw DomainError("circle group needs a circle-invariant potential");
  return {md.sample(holomorphy_potential(g.generator(), md.phi, md.grid))};
}

/// L^2(d mu_phi) projection of f onto the span of the Killing potentials.
inline std::vector<double> projection_pi(const MetricData& md, const GroupSpec& g, const std::vector<double>& f) {
  std::vector<double> out(f.size(), 0.0);
  for (const auto& th : killing_basis(md, g)) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      num += md.mu[i] * f[i] * th[i];
      den += md.mu[i] * th[i] * th[i];
    }
    if (!(den > 0.0)) throw DomainError("projection_pi: Killing potential has zero norm");
    for (std::size_t i = 0; i < f.size(); ++i) out[i] += num / den * th[i];
  }
  return out;
}

inline std::vector<double> reduced_scalar(const MetricData& md, const GroupSpec& g) {
  if (md.scalar.empty()) throw DomainError("reduced_scalar: metric data without curvature");
  std::vector<double> s(md.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = md.scalar[i] - md.sbar;
  const auto p = projection_pi(md, g, s);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= p[i];
  return s;
}

/// -int dphi S^G(phi) d mu_phi: the one-form whose primitive is E^G.
inline double modified_k_energy_slope(const MetricData& md, const GroupSpec& g, const Field& dphi) {
  const auto sg = reduced_scalar(md, g);
  const auto d = md.sample(dphi);
  double s = 0.0;
  for (std::size_t i = 0; i < sg.size(); ++i) s += md.mu[i] * d[i] * sg[i];
  return -s;
}

inline double modified_k_energy(const Potential& phi, const GroupSpec& g, const GridPtr& grid,
                                int nodes = kPathNodes) {
  if (g.kind != GroupSpec::Kind::trivial && !phi.invariant())
    throw DomainError("modified_k_energy: potential is not invariant under the group");
  const auto [x, w] = gauss_legendre(nodes);
  double total = 0.0;
  for (int q = 0; q < nodes; ++q)
    total += w[q] * modified_k_energy_slope(metric_data(x[q] * phi, grid), g, phi);
  return total;
}

/// K-energy: the modified energy for the trivial group.
inline double mabuchi_energy(const Potential& phi, const GridPtr& grid, int nodes = kPathNodes) {
  return modified_k_energy(phi, GroupSpec::trivial(), grid, nodes);
}

}  // namespace kquant
