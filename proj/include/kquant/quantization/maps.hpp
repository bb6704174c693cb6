#pragma once

// Hilb_k, FS_k, the Bergman density and the twisted potential psi.
//
//   Hilb_k(phi)(a, b) = int s_a conj(s_b) e^{-k phi} h_0^k d mu_phi
//   FS_k(H)           = (1/k) log((1/N) sum |t_a|^2_{h_0^k}),  {t_a} H-orthonormal
//   rho_k(phi)        = e^{-k phi} sum |t_a|^2_{h_0^k},        {t_a} Hilb_k(phi)-orthonormal

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/automorphism.hpp"
#include "kquant/geometry/metric.hpp"
#include "kquant/quantization/sections.hpp"

namespace kquant {

/// L^2 Gram form of the monomial sections for the metric e^{-k phi} h_0^k and
/// volume d mu_phi. Radial grids give the diagonal form exactly.
inline HermForm hilb(const MetricData& md, int k) {
  if (k < 1) throw DomainError("hilb: degree must be >= 1");
  const QuadGrid& g = *md.grid;
  const int n = k + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  std::vector<double> phi = md.sample(md.phi);
  if (g.radial()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double lu = std::log(g.u[i]), lv = std::log1p(-g.u[i]);
      for (int j = 0; j < n; ++j) h(j, j) += md.mu[i] * std::exp(j * lu + (k - j) * lv - k * phi[i]);
    }
    return {k, h};
  }
  const SectionBasis basis{k, md.grid};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Eigen::VectorXcd s = basis.values(i);
    h.noalias() += (md.mu[i] * std::exp(-k * phi[i])) * (s * s.adjoint());
  }
  h = 0.5 * (h + h.adjoint()).eval();
  return {k, h};
}

inline HermForm hilb(const Potential& phi, int k, const GridPtr& grid) {
  return hilb(metric_data(phi, grid, false), k);
}

/// How an H-orthonormal basis is produced inside fs().
enum class Factorization { cholesky, eigen };

namespace detail {

// |s_a|^2-weighted sum for a diagonal form: sum_j u^j (1-u)^(k-j) / H_jj.
struct DiagonalDensity {
  int k;
  std::vector<double> inv;
  template <class T>
  T operator()(const T& u) const {
    T acc(0.0);
    const T v = 1.0 - u;
    for (int j = 0; j <= k; ++j) acc = acc + ipow(u, j) * ipow(v, k - j) * inv[j];
    return acc;
  }
};

// sum_r c_r |(M s)_r|^2 for a general matrix M.
struct GeneralDensity {
  int k;
  Eigen::MatrixXcd m;
  std::vector<double> c;
  template <class T>
  T operator()(const T& u, const T& angle) const {
    const int n = k + 1;
    std::vector<T> re(n), im(n);
    const T lu = log(u), lv = log(1.0 - u);
    for (int a = 0; a < n; ++a) {
      const T mag = exp((0.5 * a) * lu + (0.5 * (k - a)) * lv);
      T sn, cs;
      sincos(angle * double(a), sn, cs);
      re[a] = mag * cs;
      im[a] = mag * sn;
    }
    T acc(0.0);
    for (int r = 0; r < n; ++r) {
      T tr(0.0), ti(0.0);
      for (int a = 0; a < n; ++a) {
        const double mr = m(r, a).real(), mi = m(r, a).imag();
        if (mr == 0.0 && mi == 0.0) continue;
        tr = tr + re[a] * mr - im[a] * mi;
        ti = ti + re[a] * mi + im[a] * mr;
      }
      acc = acc + (tr * tr + ti * ti) * c[r];
    }
    return acc;
  }
  // Plain doubles: also valid at the poles.
  double operator()(double u, double angle) const {
    const SectionBasis basis{k, nullptr};
    const Eigen::VectorXcd t = m * basis.values_at(u, angle);
    double acc = 0.0;
    for (int r = 0; r <= k; ++r) acc += std::norm(t(r)) * c[r];
    return acc;
  }
};

}  // namespace detail

/// sum_r c_r |t_r|^2_{h_0^k} with t = M s; diagonal M gives a radial field.
inline Field section_density(int k, const Eigen::MatrixXcd& m, std::vector<double> c) {
  if (c.empty()) c.assign(k + 1, 1.0);
  bool diagonal = true;
  for (int a = 0; a <= k && diagonal; ++a)
    for (int b = 0; b <= k; ++b)
      if (a != b && m(a, b) != std::complex<double>(0.0, 0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    std::vector<double> inv(k + 1);
    for (int j = 0; j <= k; ++j) inv[j] = c[j] * std::norm(m(j, j));
    return Field::radial(detail::DiagonalDensity{k, std::move(inv)});
  }
  return Field::general(detail::GeneralDensity{k, m, std::move(c)});
}

/// Matrix M with M H M^* = I, so t = M s is H-orthonormal.
inline Eigen::MatrixXcd orthonormal_frame(const HermForm& h, Factorization f = Factorization::cholesky) {
  const int n = h.dimension();
  if (h.is_diagonal()) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = 1.0 / std::sqrt(h.matrix()(j, j).real());
    return m;
  }
  if (f == Factorization::cholesky) {
    Eigen::LLT<Eigen::MatrixXcd> llt(h.matrix());
    return llt.matrixL().solve(Eigen::MatrixXcd::Identity(n, n));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
  return es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
}

/// Pointwise density sum_a |t_a|^2_{h_0^k} of an H-orthonormal basis.
inline Field orthonormal_density(const HermForm& h, Factorization f = Factorization::cholesky) {
  if (h.is_diagonal()) {
    std::vector<double> inv(h.dimension());
    for (int j = 0; j < h.dimension(); ++j) inv[j] = 1.0 / h.matrix()(j, j).real();
    return Field::radial(detail::DiagonalDensity{h.k(), std::move(inv)});
  }
  return section_density(h.k(), orthonormal_frame(h, f), {});
}

/// FS_k(H) = (1/k) log(density / N).
inline Potential fs(const HermForm& h, Factorization f = Factorization::cholesky) {
  const double k = h.k(), n = h.dimension();
  return Field::map(orthonormal_density(h, f), [k, n](const auto& b) { return log(b * (1.0 / n)) * (1.0 / k); });
}

/// Bergman density of phi at degree k.
struct BergmanField {
  int k = 0;
  Field rho;                  ///< e^{-k phi} * orthonormal density of Hilb_k(phi)
  std::vector<double> values; ///< rho at the grid nodes
  HermForm gram;              ///< Hilb_k(phi)
};

inline BergmanField bergman(const MetricData& md, int k) {
  BergmanField b;
  b.k = k;
  b.gram = hilb(md, k);
  const double kk = k;
  b.rho = Field::combine(md.phi, orthonormal_density(b.gram),
                         [kk](const auto& p, const auto& d) { return exp(p * (-kk)) * d; });
  b.values = md.sample(b.rho);
  return b;
}

inline BergmanField bergman(const Potential& phi, int k, const GridPtr& grid) {
  return bergman(metric_data(phi, grid, false), k);
}

/// psi_{sigma, phi} = phi o sigma + c_sigma - phi + C, int e^psi d mu_phi = N_k / k.
struct PsiField {
  int k = 0;
  AutomorphismLift sigma;
  Field psi;
  double constant = 0.0;
  std::vector<double> values;
};

inline PsiField psi_potential(const AutomorphismLift& sigma, const MetricData& md) {
  PsiField p;
  p.k = sigma.k;
  p.sigma = sigma;
  const Field raw = sigma.is_identity() ? Field::constant(0.0) : sigma.pullback_potential(md.phi) - md.phi;
  std::vector<double> rv = md.sample(raw);
  double z = 0.0;
  for (std::size_t i = 0; i < rv.size(); ++i) z += md.mu[i] * std::exp(rv[i]);
  if (!std::isfinite(z) || !(z > 0.0)) {
    std::ostringstream os;
    os << "psi_potential: normalization integral is " << z;
    throw DomainError(os.str());
  }
  p.constant = std::log(double(p.k + 1) / p.k) - std::log(z);
  p.psi = raw + p.constant;
  p.values.resize(rv.size());
  for (std::size_t i = 0; i < rv.size(); ++i) p.values[i] = rv[i] + p.constant;
  return p;
}

inline PsiField psi_potential(const AutomorphismLift& sigma, const Potential& phi, const GridPtr& grid) {
  return psi_potential(sigma, metric_data(phi, grid, false));
}

/// sup |rho_k(phi) - k e^{psi_k(phi)}| over the grid.
inline double balanced_residual(const MetricData& md, int k, const AutomorphismLift& sigma) {
  const BergmanField b = bergman(md, k);
  const PsiField p = psi_potential(sigma, md);
  double r = 0.0;
  for (std::size_t i = 0; i < b.values.size(); ++i) r = std::max(r, std::abs(b.values[i] - k * std::exp(p.values[i])));
  return r;
}

inline double balanced_residual(const Potential& phi, int k, const AutomorphismLift& sigma, const GridPtr& grid) {
  return balanced_residual(metric_data(phi, grid, false), k, sigma);
}

}  // namespace kquant
