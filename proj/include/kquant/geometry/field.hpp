#pragma once

// Smooth real functions on CP^1, written in the moment coordinate u and the
// angle. A Field can be evaluated on plain doubles or on jets, which is how all
// derivatives in the library are obtained. Kähler potentials are Fields.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/jet.hpp"

namespace kquant {

class Field {
 public:
  Field() : Field(constant(0.0)) {}

  /// Circle-invariant field; `f` must be callable on double, RJet and PJet.
  template <class F>
  static Field radial(F f) {
    auto impl = std::make_shared<Impl>();
    impl->invariant = true;
    impl->f0 = [f](double u, double) { return f(u); };
    impl->fr = [f](const RJet& u) { return f(u); };
    impl->fp = [f](const PJet& u, const PJet&) { return f(u); };
    return Field(std::move(impl));
  }

  /// General field f(u, angle); callable on (double, double) and (PJet, PJet).
  template <class F>
  static Field general(F f) {
    auto impl = std::make_shared<Impl>();
    impl->invariant = false;
    impl->f0 = [f](double u, double a) { return f(u, a); };
    impl->fp = [f](const PJet& u, const PJet& a) { return f(u, a); };
    return Field(std::move(impl));
  }

  static Field constant(double c) {
    return radial([c](const auto& u) {
      using T = std::decay_t<decltype(u)>;
      return T(c);
    });
  }

  /// phi = sum_m c[m] u^m.
  static Field polynomial(std::vector<double> coeffs) {
    return radial([c = std::move(coeffs)](const auto& u) {
      using T = std::decay_t<decltype(u)>;
      T acc(0.0);
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
      return acc;
    });
  }

  bool invariant() const { return impl_->invariant; }

  double operator()(double u, double angle = 0.0) const { return impl_->f0(u, angle); }

  RJet operator()(const RJet& u) const {
    if (!impl_->invariant) throw DomainError("radial jet evaluation of a non-invariant field");
    return impl_->fr(u);
  }

  PJet operator()(const PJet& u, const PJet& angle) const { return impl_->fp(u, angle); }

  /// Uniform evaluation: eval(u, a) for double or PJet, eval(u) for RJet.
  template <class T>
  T eval(const T& u, const T& angle) const {
    if constexpr (std::is_same_v<T, double>)
      return (*this)(u, angle);
    else if constexpr (std::is_same_v<T, RJet>)
      return (*this)(u);
    else
      return (*this)(u, angle);
  }

  friend Field operator+(const Field& a, const Field& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
  }
  friend Field operator-(const Field& a, const Field& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
  }
  friend Field operator*(const Field& a, const Field& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
  }
  friend Field operator*(double s, const Field& a) {
    return map(a, [s](const auto& x) { return x * s; });
  }
  friend Field operator+(const Field& a, double s) {
    return map(a, [s](const auto& x) { return x + s; });
  }
  friend Field operator-(const Field& a, double s) { return a + (-s); }

  /// Pointwise g(f), g generic over scalar and jet types.
  template <class G>
  static Field map(const Field& a, G g) {
    if (a.invariant()) return radial([a, g](const auto& u) { return g(a.eval(u, u)); });
    return general([a, g](const auto& u, const auto& t) { return g(a.eval(u, t)); });
  }

  template <class G>
  static Field combine(const Field& a, const Field& b, G g) {
    if (a.invariant() && b.invariant())
      return radial([a, b, g](const auto& u) { return g(a.eval(u, u), b.eval(u, u)); });
    return general([a, b, g](const auto& u, const auto& t) {
      return g(a.eval(u, t), b.eval(u, t));
    });
  }

 private:
  struct Impl {
    bool invariant = true;
    std::function<double(double, double)> f0;
    std::function<RJet(const RJet&)> fr;
    std::function<PJet(const PJet&, const PJet&)> fp;
  };
  explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// A Kähler potential relative to the Fubini-Study form.
using Potential = Field;

// Derivative of a jet in its (outer) variable; the top order becomes invalid.
template <int N, class T>
Jet<N, T> d_outer(const Jet<N, T>& j) {
  Jet<N, T> r;
  for (int i = 0; i < N; ++i) r.c[i] = j.c[i + 1] * double(i + 1);
  r.c[N] = T(0.0);
  return r;
}

/// Derivative of a PJet in the angle (inner) variable.
inline PJet d_angle(const PJet& j) {
  PJet r;
  for (int i = 0; i <= 4; ++i) r.c[i] = d_outer(j.c[i]);
  return r;
}

}  // namespace kquant
