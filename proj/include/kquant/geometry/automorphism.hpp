#pragma once

// Holomorphic vector fields z -> rate * z d/dz on CP^1, their flows, and the
// induced action on potentials and on sections of O(k).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/field.hpp"
#include "kquant/geometry/metric.hpp"

namespace kquant {

/// Holomorphic vector field with (1,0)-part rate * z d/dz. A real rate is the
/// gradient of a moment map (real scaling); an imaginary rate is a rotation.
struct VectorField {
  std::complex<double> rate{0.0, 0.0};

  static VectorField zero() { return {}; }
  /// Gradient field r d/dr of the rotation moment; its flow is z -> e^t z.
  static VectorField rotation_moment_gradient(double strength = 1.0) { return {{strength, 0.0}}; }
  static VectorField rotation(double speed = 1.0) { return {{0.0, speed}}; }

  bool is_zero() const { return rate == std::complex<double>(0.0, 0.0); }

  /// Killing potential for omega_0 with mean zero: (Re rate / 2 pi)(u - 1/2).
  Field killing_potential() const {
    const double c = rate.real() / (2.0 * std::numbers::pi);
    return Field::radial([c](const auto& u) { return c * (u - 0.5); });
  }

  /// Flow map at time t: z -> exp(rate t) z.
  std::complex<double> flow_multiplier(double t) const { return std::exp(rate * t); }
};

/// Automorphism z -> lambda z of CP^1 lifted to O(k).
struct AutomorphismLift {
  std::complex<double> lambda{1.0, 0.0};
  int k = 1;

  static AutomorphismLift identity(int k) { return {{1.0, 0.0}, k}; }

  bool is_identity() const { return std::abs(lambda - 1.0) == 0.0; }

  std::complex<double> point_map(std::complex<double> z) const { return lambda * z; }

  /// Pullback on the monomial basis: s_j -> lambda^j s_j.
  Eigen::MatrixXcd section_matrix() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) m(j, j) = std::pow(lambda, j);
    return m;
  }

  /// c with sigma^* omega_0 = omega_0 + (i / 2 pi) ddbar c: log(1 - u + |lambda|^2 u).
  Field base_potential() const {
    const double m = std::norm(lambda);
    return Field::radial([m](const auto& u) { return log(1.0 - u + m * u); });
  }

  /// f o sigma.
  Field pullback(const Field& f) const {
    const double m = std::norm(lambda);
    const double shift = std::arg(lambda);
    if (f.invariant())
      return Field::radial([f, m](const auto& u) { return f.eval(map_u(u, m), map_u(u, m)); });
    return Field::general([f, m, shift](const auto& u, const auto& a) {
      return f.eval(map_u(u, m), a + shift);
    });
  }

  /// Potential of sigma^* omega_phi relative to omega_0: phi o sigma + c_sigma.
  Potential pullback_potential(const Potential& phi) const { return pullback(phi) + base_potential(); }

  AutomorphismLift inverse() const { return {1.0 / lambda, k}; }

  AutomorphismLift compose(const AutomorphismLift& o) const { return {lambda * o.lambda, k}; }

 private:
  template <class T>
  static T map_u(const T& u, double m) {
    return m * u / (1.0 - u + m * u);
  }
};

/// Lift of the time-t flow of (c0 / k) V; c0 fixes the time normalization.
inline AutomorphismLift sigma_lift(const VectorField& v, int k, double t, double c0) {
  if (k < 1) throw DomainError("sigma_lift: degree must be >= 1");
  return {v.flow_multiplier(c0 * t / k), k};
}

/// theta(phi) with g_phi(V, .) = d theta and mean zero against d mu_phi.
///
/// For V = rate z d/dz, theta = (Re rate / 2 pi) (y - mean y) where
/// y = u + u (1 - u) phi_u is the moment coordinate of omega_phi. The
/// defining equation is checked at the nodes; an imaginary rate has no
/// gradient potential and is rejected through that residual.
inline Field holomorphy_potential(const VectorField& v, const Potential& phi, const GridPtr& grid,
                                  double tol = 1e-10) {
  if (!phi.invariant())
    throw DomainError("holomorphy_potential: potential must be invariant under the circle action");
  const double c = v.rate.real() / (2.0 * std::numbers::pi);
  const Field y = Field::radial([phi](const auto& u) {
    using T = std::decay_t<decltype(u)>;
    if constexpr (std::is_same_v<T, double>) {
      const RJet uj = RJet::variable(u);
      return primal(uj + uj * (1.0 - uj) * d_outer(phi.eval(uj, uj)));
    } else {
      return u + u * (1.0 - u) * d_outer(phi.eval(u, u));
    }
  });
  const MetricData md = metric_data(phi, grid, false);
  const double ybar = md.integrate(md.sample(y));
  Field theta = c * (y - ybar);

  // Residual of g(V, .) = d theta in the coordinates (xi = log r^2, angle):
  //   d_xi theta = Re(rate) * A / (2 pi),  d_angle theta = Im(rate) * A / pi,
  // where A = u (1 - u) w is the density in (xi, angle).
  double residual = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double u = grid->u[i];
    const RJet uj = RJet::variable(u);
    const double theta_xi = u * (1.0 - u) * primal(d_outer(theta(uj)));
    const double area = u * (1.0 - u) * md.density[i];
    residual = std::max(residual, std::abs(theta_xi - v.rate.real() * area / (2.0 * std::numbers::pi)));
    residual = std::max(residual, std::abs(v.rate.imag() * area / std::numbers::pi));
  }
  if (residual > tol) {
    std::ostringstream os;
    os << "holomorphy_potential: residual " << residual << " exceeds " << tol
       << " (vector field has no real holomorphy potential)";
    throw DomainError(os.str());
  }
  return theta;
}

}  // namespace kquant
