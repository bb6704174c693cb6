#pragma once

// Truncated Taylor arithmetic ("jets") used to differentiate potentials and
// fields exactly. Coefficients are normalized: c[i] = f^{(i)}(x0) / i!.
// Nesting Jet<N, Jet<M>> gives mixed partial derivatives in two variables.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace kquant {

template <int N, class T = double>
struct Jet {
  static_assert(N >= 0);
  std::array<T, N + 1> c{};

  Jet() = default;
  Jet(double v) { c[0] = T(v); }  // NOLINT(google-explicit-constructor)
  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  Jet(const T& v) {  // NOLINT(google-explicit-constructor)
    c[0] = v;
  }

  /// Independent variable at x0.
  static Jet variable(const T& x0) {
    Jet j;
    j.c[0] = x0;
    if constexpr (N >= 1) j.c[1] = T(1.0);
    return j;
  }

  const T& value() const { return c[0]; }

  /// i-th derivative (not normalized).
  T derivative(int i) const {
    double f = 1.0;
    for (int m = 2; m <= i; ++m) f *= m;
    return c[i] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= N; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator-(Jet a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) {
    a.c[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= N; ++i) {
      T acc = a.c[0] * b.c[i];
      for (int j = 1; j <= i; ++j) acc += a.c[j] * b.c[i - j];
      r.c[i] = acc;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    const T inv0 = T(1.0) / b.c[0];
    for (int n = 0; n <= N; ++n) {
      T acc = a.c[n];
      for (int j = 1; j <= n; ++j) acc -= b.c[j] * q.c[n - j];
      q.c[n] = acc * inv0;
    }
    return q;
  }

  friend Jet exp(const Jet& a) {
    using std::exp;
    Jet e;
    e.c[0] = exp(a.c[0]);
    for (int n = 1; n <= N; ++n) {
      T acc = T(0.0);
      for (int j = 1; j <= n; ++j) acc += (a.c[j] * e.c[n - j]) * double(j);
      e.c[n] = acc * (1.0 / n);
    }
    return e;
  }

  friend Jet log(const Jet& a) {
    using std::log;
    Jet l;
    l.c[0] = log(a.c[0]);
    const T inv0 = T(1.0) / a.c[0];
    for (int n = 1; n <= N; ++n) {
      T acc = a.c[n];
      for (int j = 1; j < n; ++j) acc -= (l.c[j] * a.c[n - j]) * (double(j) / n);
      l.c[n] = acc * inv0;
    }
    return l;
  }

  friend Jet sqrt(const Jet& a) { return exp(log(a) * 0.5); }

  friend Jet pow(const Jet& a, double p) { return exp(log(a) * p); }

  /// Integer power by repeated squaring; valid at a zero base value.
  friend Jet ipow(Jet a, int p) {
    Jet r(1.0);
    while (p > 0) {
      if (p & 1) r = r * a;
      a = a * a;
      p >>= 1;
    }
    return r;
  }

  // sin and cos share one recurrence: s' = c a', c' = -s a'.
  friend void sincos(const Jet& a, Jet& s, Jet& co) {
    using std::cos;
    using std::sin;
    s = Jet();
    co = Jet();
    s.c[0] = sin(a.c[0]);
    co.c[0] = cos(a.c[0]);
    for (int n = 1; n <= N; ++n) {
      T as = T(0.0), ac = T(0.0);
      for (int j = 1; j <= n; ++j) {
        as += (a.c[j] * co.c[n - j]) * double(j);
        ac -= (a.c[j] * s.c[n - j]) * double(j);
      }
      s.c[n] = as * (1.0 / n);
      co.c[n] = ac * (1.0 / n);
    }
  }
  friend Jet sin(const Jet& a) {
    Jet s, co;
    sincos(a, s, co);
    return s;
  }
  friend Jet cos(const Jet& a) {
    Jet s, co;
    sincos(a, s, co);
    return co;
  }
};

inline double ipow(double a, int p) {
  double r = 1.0;
  while (p > 0) {
    if (p & 1) r *= a;
    a *= a;
    p >>= 1;
  }
  return r;
}

inline void sincos(double a, double& s, double& c) {
  s = std::sin(a);
  c = std::cos(a);
}

/// Jets in the radial variable u.
using RJet = Jet<4>;
/// Jets in (u, angle): outer index is the u-order, inner the angle-order.
using PJet = Jet<4, Jet<4>>;

template <class T>
struct is_jet : std::false_type {};
template <int N, class T>
struct is_jet<Jet<N, T>> : std::true_type {};

/// Plain value of a scalar, jet or nested jet.
inline double primal(double x) { return x; }
template <int N, class T>
double primal(const Jet<N, T>& j) {
  return primal(j.c[0]);
}

}  // namespace kquant
