#pragma once

// Paths s -> phi_s in the space of potentials, s in [0, 1], with their first
// and second s-derivatives. A path is a chain of smooth legs; integrals along
// a path are summed leg by leg so kinks between legs cost no accuracy.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/field.hpp"
#include "kquant/geometry/grid.hpp"

namespace kquant {

struct PathLeg {
  std::function<Potential(double)> at;
  std::function<Potential(double)> velocity;
  std::function<Potential(double)> acceleration;
};

struct PathInPotentials {
  std::string name;
  std::vector<PathLeg> legs;

  Potential start() const { return legs.front().at(0.0); }
  Potential end() const { return legs.back().at(1.0); }

  /// Single-leg views used by the pointwise formulas.
  const PathLeg& leg(std::size_t i = 0) const { return legs.at(i); }

  /// phi_s = phi0 + s (phi1 - phi0).
  static PathInPotentials linear(const Potential& phi0, const Potential& phi1) {
    const Potential d = phi1 - phi0;
    PathLeg l;
    l.at = [phi0, d](double s) { return phi0 + s * d; };
    l.velocity = [d](double) { return d; };
    l.acceleration = [](double) { return Field::constant(0.0); };
    return {"linear", {l}};
  }

  /// phi_s = phi0 + s^2 (phi1 - phi0): same curve, different speed.
  static PathInPotentials quadratic(const Potential& phi0, const Potential& phi1) {
    const Potential d = phi1 - phi0;
    PathLeg l;
    l.at = [phi0, d](double s) { return phi0 + (s * s) * d; };
    l.velocity = [d](double s) { return (2.0 * s) * d; };
    l.acceleration = [d](double) { return 2.0 * d; };
    return {"quadratic", {l}};
  }

  /// phi_s = phi0 + s (phi1 - phi0) + s (1 - s) bend: a different curve.
  static PathInPotentials bent(const Potential& phi0, const Potential& phi1, const Potential& bend) {
    const Potential d = phi1 - phi0;
    PathLeg l;
    l.at = [phi0, d, bend](double s) { return phi0 + s * d + (s * (1.0 - s)) * bend; };
    l.velocity = [d, bend](double s) { return d + (1.0 - 2.0 * s) * bend; };
    l.acceleration = [bend](double) { return -2.0 * bend; };
    return {"bent", {l}};
  }

  /// phi0 -> mid -> phi1 along two straight legs.
  static PathInPotentials two_leg(const Potential& phi0, const Potential& mid, const Potential& phi1) {
    PathInPotentials p{"two-leg", {}};
    p.legs.push_back(linear(phi0, mid).legs[0]);
    p.legs.push_back(linear(mid, phi1).legs[0]);
    return p;
  }

  /// phi_s = phi + s * shift, e.g. shift = (1/k) log rho_k(phi).
  static PathInPotentials shifted(const Potential& phi, const Field& shift, std::string name = "shifted") {
    PathInPotentials p = linear(phi, phi + shift);
    p.name = std::move(name);
    return p;
  }

  static PathInPotentials constant(const Potential& phi) {
    PathLeg l;
    l.at = [phi](double) { return phi; };
    l.velocity = [](double) { return Field::constant(0.0); };
    l.acceleration = [](double) { return Field::constant(0.0); };
    return {"constant", {l}};
  }
};

/// Gauss-Legendre rule on [0, 1] for path integrals.
inline constexpr int kPathNodes = 32;

}  // namespace kquant
