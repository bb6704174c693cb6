#pragma once

// Holomorphic sections of O(k) over CP^1 and Hermitian forms on them.
//
// The basis is the monomials s_j = z^j, j = 0..k. In the moment coordinate
// their pointwise h_0^k-norms are |s_j|^2 = u^j (1 - u)^(k - j).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/metric.hpp"

namespace kquant {

inline int section_dimension(int k) { return k + 1; }

struct SectionBasis {
  int k = 1;
  GridPtr grid;

  int dimension() const { return k + 1; }

  /// h_0^k-normalized values of s_0..s_k at node i (complex phases included).
  Eigen::VectorXcd values(std::size_t i) const { return values_at(grid->u[i], grid->theta[i]); }

  Eigen::VectorXcd values_at(double u, double angle) const {
    Eigen::VectorXcd v(k + 1);
    const double lu = std::log(u), lv = std::log1p(-u);
    for (int j = 0; j <= k; ++j) {
      const double mag = (u == 0.0)   ? (j == 0 ? 1.0 : 0.0)
                         : (u == 1.0) ? (j == k ? 1.0 : 0.0)
                                      : std::exp(0.5 * (j * lu + (k - j) * lv));
      v(j) = std::polar(mag, j * angle);
    }
    return v;
  }

  /// Pointwise pairing matrix (s_a, s_b)_{h_0^k} = s_a conj(s_b) at node i.
  Eigen::MatrixXcd pairing(std::size_t i) const {
    const Eigen::VectorXcd v = values(i);
    return v * v.adjoint();
  }
};

inline SectionBasis section_basis(int k, const GridPtr& grid) {
  if (k < 1) throw DomainError("section_basis: degree must be >= 1");
  return {k, grid};
}

/// Positive definite Hermitian form on H^0(O(k)) in the monomial basis,
/// H(a, b) = <s_a, s_b>.
class HermForm {
 public:
  HermForm() = default;
  HermForm(int k, Eigen::MatrixXcd m) : k_(k), m_(std::move(m)) { validate(); }

  static HermForm diagonal(int k, const std::vector<double>& d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) m(j, j) = d.at(j);
    return {k, m};
  }

  int k() const { return k_; }
  int dimension() const { return k_ + 1; }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  bool is_diagonal() const {
    for (int a = 0; a < m_.rows(); ++a)
      for (int b = 0; b < m_.cols(); ++b)
        if (a != b && m_(a, b) != std::complex<double>(0.0, 0.0)) return false;
    return true;
  }

  std::vector<double> diagonal_entries() const {
    std::vector<double> d(m_.rows());
    for (int j = 0; j < m_.rows(); ++j) d[j] = m_(j, j).real();
    return d;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  double log_det() const {
    if (is_diagonal()) {
      double s = 0.0;
      for (int j = 0; j < m_.rows(); ++j) s += std::log(m_(j, j).real());
      return s;
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(m_);
    double s = 0.0;
    for (int j = 0; j < m_.rows(); ++j) s += 2.0 * std::log(llt.matrixL()(j, j).real());
    return s;
  }

  HermForm scaled(double c) const { return {k_, m_ * c}; }

  friend bool operator==(const HermForm& a, const HermForm& b) { return a.k_ == b.k_ && a.m_ == b.m_; }

 private:
  void validate() const {
    if (m_.rows() != k_ + 1 || m_.cols() != k_ + 1)
      throw NotPositiveDefiniteError("HermForm: matrix size does not match degree " + std::to_string(k_));
    const double scale = m_.cwiseAbs().maxCoeff();
    if (!((m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
      throw NotPositiveDefiniteError("HermForm: matrix is not Hermitian");
    Eigen::LLT<Eigen::MatrixXcd> llt(m_);
    if (llt.info() != Eigen::Success || !(min_eigenvalue() > 0.0))
      throw NotPositiveDefiniteError("HermForm: matrix is not positive definite");
  }

  int k_ = 0;
  Eigen::MatrixXcd m_;
};

// Text format:
//   hermform <k>
//   N rows of N complex entries written as "re im" pairs.
inline void write_hermform(std::ostream& os, const HermForm& h) {
  os << "hermform " << h.k() << "\n" << std::setprecision(17);
  const auto& m = h.matrix();
  for (int a = 0; a < m.rows(); ++a) {
    for (int b = 0; b < m.cols(); ++b) os << (b ? " " : "") << m(a, b).real() << " " << m(a, b).imag();
    os << "\n";
  }
}

inline HermForm read_hermform(std::istream& is) {
  std::string line, tag;
  int lineno = 0;
  auto next = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
        continue;
      return true;
    }
    return false;
  };
  if (!next()) throw ParseError("empty hermform input");
  std::istringstream hs(line);
  int k = 0;
  if (!(hs >> tag >> k) || tag != "hermform" || k < 1)
    throw ParseError("expected header 'hermform <k>'", lineno);
  const int n = k + 1;
  Eigen::MatrixXcd m(n, n);
  for (int a = 0; a < n; ++a) {
    if (!next()) throw ParseError("expected " + std::to_string(n) + " matrix rows", lineno);
    std::istringstream rs(line);
    for (int b = 0; b < n; ++b) {
      double re, im;
      if (!(rs >> re >> im)) throw ParseError("row needs " + std::to_string(2 * n) + " numbers", lineno);
      m(a, b) = {re, im};
    }
  }
  try {
    return {k, m};
  } catch (const NotPositiveDefiniteError& e) {
    throw ParseError(e.what(), lineno);
  }
}

}  // namespace kquant
