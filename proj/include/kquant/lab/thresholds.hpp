#pragma once

// Pass/fail thresholds of the experiments.

namespace kquant::lab::thresholds {

inline constexpr double kBalancedRho = 1e-8;       // sup |rho_k(0) - (k+1)|
inline constexpr double kBalancedFs = 1e-9;        // sup |FS o Hilb(0)|
inline constexpr double kQuantIdentity = 1e-9;     // FS o Hilb identity
inline constexpr double kMinDecay = 0.9;           // fitted exponent p
inline constexpr double kMaxFitResidual = 0.1;     // bergman-expansion fit residual
inline constexpr double kPsiFinalFactor = 1.5;     // final value vs fitted prediction
inline constexpr double kPathAgreement = 1e-6;     // relative, I_ks along different paths
inline constexpr double kHessianAgreement = 1e-4;  // relative, formula vs finite differences
inline constexpr double kConcavity = 1e-10;        // Bergman-path hessian upper bound
inline constexpr int kConcavityMaxK0 = 32;
inline constexpr double kConvexity = -1e-8;        // FD second derivative lower bound
inline constexpr double kMinimization = -1e-8;     // min E^G(phi) - E^G(0)

}  // namespace kquant::lab::thresholds
