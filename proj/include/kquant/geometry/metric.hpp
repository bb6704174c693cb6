#pragma once

// Metric quantities of omega_phi = omega_0 + (i / 2 pi) ddbar(phi) on CP^1.
//
// Conventions (fixed for the whole library):
//   omega_0 = (i / 2 pi) ddbar log(1 + |z|^2), total volume 1;
//   d mu_phi = w * du * dtheta / (2 pi) with
//       w = 1 + (u (1 - u) phi_u)_u + phi_tt / (4 u (1 - u));
//   Laplacian  Delta f = -(1 / a) d_z d_zbar f, where omega_phi = (i / 2 pi) a dz ^ dzbar;
//   scalar curvature S = Delta log a, so S(omega_0) = 2 = mean curvature;
//   |df|^2 = 2 |d_z f|^2 / a, hence Delta(f^2) = 2 f Delta f - |df|^2.

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/field.hpp"
#include "kquant/geometry/grid.hpp"

namespace kquant {

using GridPtr = std::shared_ptr<const QuadGrid>;

inline GridPtr make_grid(GridMode mode, int resolution) {
  return std::make_shared<const QuadGrid>(build_grid(mode, resolution));
}

/// Mean scalar curvature of the model.
inline constexpr double kMeanScalar = 2.0;

namespace detail {

// Operator L/(u(1-u)) where L = d_xi^2 + d_t^2 / 4 and xi = log r^2:
//   (u (1 - u) f_u)_u + f_tt / (4 u (1 - u)).
inline RJet flat_laplace_u(const RJet& u, const RJet& f) {
  return d_outer(u * (1.0 - u) * d_outer(f));
}
inline PJet flat_laplace_u(const PJet& u, const PJet& f) {
  return d_outer(u * (1.0 - u) * d_outer(f)) + d_angle(d_angle(f)) / (4.0 * u * (1.0 - u));
}

inline RJet grad_sq_flat(const RJet& u, const RJet& f) {
  const RJet fu = d_outer(f);
  return 2.0 * u * (1.0 - u) * fu * fu;
}
inline PJet grad_sq_flat(const PJet& u, const PJet& f) {
  const PJet fu = d_outer(f), ft = d_angle(f);
  return 2.0 * (u * (1.0 - u) * fu * fu + ft * ft / (4.0 * u * (1.0 - u)));
}

template <class J>
J density(const J& u, const J& phi) {
  return 1.0 + flat_laplace_u(u, phi);
}

// Node variables as jets.
struct RadialVars {
  RJet u;
  RJet a;
};
struct PlaneVars {
  PJet u;
  PJet a;
};

inline RadialVars radial_vars(double u) { return {RJet::variable(u), RJet(0.0)}; }
inline PlaneVars plane_vars(double u, double a) {
  PlaneVars v;
  v.u = PJet::variable(Jet<4>(u));
  v.a = PJet(Jet<4>::variable(a));
  return v;
}

/// Calls fn(u_jet, angle_jet) with the jet type matching the grid mode.
template <class Fn>
auto with_node_jets(const QuadGrid& g, std::size_t i, Fn&& fn) {
  if (g.radial()) {
    auto v = radial_vars(g.u[i]);
    return fn(v.u, v.a);
  }
  auto v = plane_vars(g.u[i], g.theta[i]);
  return fn(v.u, v.a);
}

}  // namespace detail

/// Metric data of a potential on a grid.
struct MetricData {
  GridPtr grid;
  Potential phi;
  std::vector<double> density;  ///< d mu_phi / d mu_0 at the nodes
  std::vector<double> mu;       ///< quadrature weights of d mu_phi
  std::vector<double> scalar;   ///< S(phi); empty when curvature was not requested
  double sbar = kMeanScalar;

  std::size_t size() const { return mu.size(); }

  double integrate(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += mu[i] * f[i];
    return s;
  }

  double volume() const {
    double s = 0.0;
    for (double m : mu) s += m;
    return s;
  }

  std::vector<double> sample(const Field& f) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = f(grid->u[i], grid->theta[i]);
    return out;
  }

  /// Delta_phi f at the nodes.
  std::vector<double> laplacian(const Field& f) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i)
      out[i] = detail::with_node_jets(*grid, i, [&](const auto& u, const auto& a) {
        return -primal(detail::flat_laplace_u(u, f.eval(u, a))) / density[i];
      });
    return out;
  }

  /// |df|^2_phi at the nodes.
  std::vector<double> grad_norm2(const Field& f) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i)
      out[i] = detail::with_node_jets(*grid, i, [&](const auto& u, const auto& a) {
        return primal(detail::grad_sq_flat(u, f.eval(u, a))) / density[i];
      });
    return out;
  }
};

/// Computes the metric of omega_phi on the grid. Rejects potentials whose
/// form is not positive at some node.
inline MetricData metric_data(const Potential& phi, const GridPtr& grid, bool with_curvature = true) {
  if (grid->mode == GridMode::radial && !phi.invariant())
    throw DomainError("metric_data: a non-invariant potential needs a full-2d grid");
  MetricData m;
  m.grid = grid;
  m.phi = phi;
  const std::size_t n = grid->size();
  m.density.resize(n);
  m.mu.resize(n);
  if (with_curvature) m.scalar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::with_node_jets(*grid, i, [&](const auto& u, const auto& a) {
      const auto w = detail::density(u, phi.eval(u, a));
      const double wv = primal(w);
      if (!(wv > 0.0)) {
        std::ostringstream os;
        os << "potential is not Kähler: density " << wv << " at node " << i << " (u=" << grid->u[i]
           << ", angle=" << grid->theta[i] << ")";
        throw NonKahlerError(os.str());
      }
      m.density[i] = wv;
      if (with_curvature) {
        // S = 2 / w - L(log w) / (u (1 - u) w)
        const auto lw = log(w);
        m.scalar[i] = (2.0 - primal(detail::flat_laplace_u(u, lw))) / wv;
      }
      return 0;
    });
    m.mu[i] = grid->weight[i] * m.density[i];
  }
  return m;
}

/// Minimum of the volume density over the grid (positive iff admissible there).
inline double min_density(const Potential& phi, const GridPtr& grid) {
  double mn = INFINITY;
  for (std::size_t i = 0; i < grid->size(); ++i)
    mn = std::min(mn, detail::with_node_jets(*grid, i, [&](const auto& u, const auto& a) {
                    return primal(detail::density(u, phi.eval(u, a)));
                  }));
  return mn;
}

}  // namespace kquant
