#pragma once

// Fixed-point iteration toward sigma-balanced potentials:
//   phi_{m+1} = FS_k(Hilb_k(phi_m)) o sigma^{-1} + c_{sigma^{-1}},  mean-normalized.
// At sigma = identity this is the usual T_k iteration.

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "kquant/error.hpp"
#include "kquant/geometry/automorphism.hpp"
#include "kquant/geometry/metric.hpp"
#include "kquant/quantization/maps.hpp"

namespace kquant {

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  double energy = 0.0;
};

struct IterationResult {
  Potential phi;
  bool converged = false;
  std::vector<IterationRecord> log;

  int iterations() const { return log.empty() ? 0 : log.back().iter; }
  double residual() const { return log.empty() ? INFINITY : log.back().residual; }
};

struct IterationOptions {
  int max_iter = 200;
  double tol = 1e-8;
  /// Energy column of the log; defaults to I_k(Hilb_k(phi)) relative to the base form.
  std::function<double(const Potential&)> energy;
};

/// Subtracts the mean of phi against d mu_0.
inline Potential mean_normalized(const Potential& phi, const QuadGrid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight[i] * phi(grid.u[i], grid.theta[i]);
  return phi - s;
}

inline double log_det_relative_to_base(const HermForm& h) {
  const int k = h.k();
  double base = 0.0;
  for (int j = 0; j <= k; ++j) base += std::lgamma(j + 1.0) + std::lgamma(k - j + 1.0) - std::lgamma(k + 2.0);
  return h.log_det() - base;
}

inline IterationResult sigma_balanced_iterate(const Potential& phi0, int k, const AutomorphismLift& sigma,
                                              const GridPtr& grid, const IterationOptions& opt = {}) {
  IterationResult res;
  const AutomorphismLift inv = sigma.inverse();
  Potential phi = phi0;
  for (int m = 0;; ++m) {
    MetricData md;
    try {
      md = metric_data(phi, grid, false);
    } catch (const NonKahlerError& e) {
      std::ostringstream os;
      os << "sigma_balanced_iterate: iterate " << m << " lost positivity: " << e.what();
      throw NonKahlerError(os.str());
    }
    const BergmanField b = bergman(md, k);
    const PsiField p = psi_potential(sigma, md);
    double r = 0.0;
    for (std::size_t i = 0; i < b.values.size(); ++i) r = std::max(r, std::abs(b.values[i] - k * std::exp(p.values[i])));
    IterationRecord rec;
    rec.iter = m;
    rec.residual = r;
    rec.min_eigenvalue = b.gram.min_eigenvalue();
    rec.energy = opt.energy ? opt.energy(phi) : log_det_relative_to_base(b.gram);
    res.log.push_back(rec);
    if (r <= opt.tol) {
      res.converged = true;
      break;
    }
    if (m >= opt.max_iter) break;
    Potential next = fs(b.gram);
    if (!inv.is_identity()) next = inv.pullback_potential(next);
    phi = mean_normalized(next, *grid);
  }
  res.phi = phi;
  return res;
}

inline void write_iteration_log(std::ostream& os, const IterationResult& r) {
  os << "iter,residual,min_eigenvalue,energy\n" << std::setprecision(17);
  for (const auto& e : r.log) os << e.iter << "," << e.residual << "," << e.min_eigenvalue << "," << e.energy << "\n";
}

}  // namespace kquant
