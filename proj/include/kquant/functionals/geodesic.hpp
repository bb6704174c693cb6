#pragma once

// Geodesics in the space B_k of positive Hermitian forms and the variation of
// Z_ks along them.
//
// With H_0 = F F^* and F^{-1} H_1 F^{-*} = diag(e^{2 lambda}) (after a unitary
// change of F), the geodesic is H(s) = F diag(e^{2 lambda s}) F^*. Its
// orthonormal frame is t(s) = diag(e^{-lambda s}) F^{-1} s, so
//   d/ds FS_k(H(s)) = -(2/k) sum lambda |t|^2 / sum |t|^2,
//   d/ds I_k(H(s))  = 2 sum lambda.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/functionals/aubin.hpp"
#include "kquant/quantization/maps.hpp"

namespace kquant {

struct GeodesicInB {
  HermForm h0, h1;
  Eigen::MatrixXcd frame;   ///< F with H(s) = F diag(e^{2 lambda s}) F^*
  Eigen::VectorXd lambda;   ///< half log-eigenvalues of H_1 relative to H_0
  bool diagonal = false;    ///< both ends diagonal: the path stays diagonal

  int k() const { return h0.k(); }

  double distance() const { return 2.0 * lambda.norm(); }

  HermForm at(double s) const {
    const int n = h0.dimension();
    if (diagonal) {
      std::vector<double> d(n);
      for (int j = 0; j < n; ++j) d[j] = h0.matrix()(j, j).real() * std::exp(2.0 * lambda(j) * s);
      return HermForm::diagonal(k(), d);
    }
    Eigen::VectorXd e(n);
    for (int j = 0; j < n; ++j) e(j) = std::exp(2.0 * lambda(j) * s);
    Eigen::MatrixXcd m = frame * e.asDiagonal() * frame.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    return {k(), m};
  }

  /// M(s) with M H(s) M^* = I.
  Eigen::MatrixXcd orthonormal_frame_at(double s) const {
    const int n = h0.dimension();
    Eigen::VectorXd e(n);
    for (int j = 0; j < n; ++j) e(j) = std::exp(-lambda(j) * s);
    return e.asDiagonal() * frame_inverse;
  }

  /// d/ds FS_k(H(s)) as a field.
  Field fs_velocity(double s) const {
    const int kk = k();
    std::vector<double> c(lambda.size());
    for (int j = 0; j < lambda.size(); ++j) c[j] = -2.0 * lambda(j);
    const Eigen::MatrixXcd m = orthonormal_frame_at(s);
    return Field::combine(section_density(kk, m, c), section_density(kk, m, {}),
                          [kk](const auto& num, const auto& den) { return num / den * (1.0 / kk); });
  }

  Eigen::MatrixXcd frame_inverse;
};

inline GeodesicInB bk_geodesic(const HermForm& h0, const HermForm& h1) {
  if (h0.k() != h1.k()) throw DomainError("bk_geodesic: endpoints have different degrees");
  GeodesicInB g;
  g.h0 = h0;
  g.h1 = h1;
  const int n = h0.dimension();
  g.lambda.resize(n);
  if (h0.is_diagonal() && h1.is_diagonal()) {
    g.diagonal = true;
    g.frame = Eigen::MatrixXcd::Zero(n, n);
    g.frame_inverse = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const double a = h0.matrix()(j, j).real(), b = h1.matrix()(j, j).real();
      g.lambda(j) = 0.5 * std::log(b / a);
      g.frame(j, j) = std::sqrt(a);
      g.frame_inverse(j, j) = 1.0 / std::sqrt(a);
    }
    return g;
  }
  // Whitening by the Cholesky factor of H_0, then a Hermitian eigendecomposition.
  Eigen::LLT<Eigen::MatrixXcd> llt(h0.matrix());
  const Eigen::MatrixXcd l = llt.matrixL();
  const Eigen::MatrixXcd linv = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(n, n));
  Eigen::MatrixXcd rel = linv * h1.matrix() * linv.adjoint();
  rel = 0.5 * (rel + rel.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rel);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw NotPositiveDefiniteError("bk_geodesic: relative form is not positive");
  for (int j = 0; j < n; ++j) g.lambda(j) = 0.5 * std::log(es.eigenvalues()(j));
  g.frame = l * es.eigenvectors();
  g.frame_inverse = es.eigenvectors().adjoint() * linv;
  return g;
}

/// dZ_ks(H(s))/ds by the chain rule.
inline double z_first_variation(const GeodesicInB& g, double s, const AutomorphismLift& sigma, const GridPtr& grid) {
  const Potential phi = fs(g.at(s));
  return delta_i_sigma(phi, g.fs_velocity(s), g.k(), sigma, grid) + 2.0 * g.lambda.sum();
}

/// Fourth-order central difference of s -> Z_ks(H(s)).
inline double z_second_derivative_fd(const GeodesicInB& g, double s, const AutomorphismLift& sigma,
                                     const GridPtr& grid, double h = 1e-2) {
  auto z = [&](double t) { return z_sigma_k(g.at(t), sigma, grid); };
  return (-z(s + 2 * h) + 16 * z(s + h) - 30 * z(s) + 16 * z(s - h) - z(s - 2 * h)) / (12 * h * h);
}

struct FkPrime {
  double value = 0.0;         ///< k^{-1} dZ_ks(H(s))/ds at s = 0
  double lambda_bound = 0.0;  ///< C = max |lambda| / k
  GeodesicInB geodesic;
};

/// Slope at Hilb_k(phi_star) of Z_ks along the geodesic towards Hilb_k(phi).
inline FkPrime fk_prime(const Potential& phi, const Potential& phi_star, const AutomorphismLift& sigma,
                        const GridPtr& grid) {
  const int k = sigma.k;
  FkPrime r;
  r.geodesic = bk_geodesic(hilb(phi_star, k, grid), hilb(phi, k, grid));
  r.value = z_first_variation(r.geodesic, 0.0, sigma, grid) / k;
  r.lambda_bound = r.geodesic.lambda.cwiseAbs().maxCoeff() / k;
  return r;
}

}  // namespace kquant
