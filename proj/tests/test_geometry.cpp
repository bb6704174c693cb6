#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "kquant/geometry/automorphism.hpp"
#include "kquant/geometry/grid.hpp"
#include "kquant/geometry/metric.hpp"
#include "kquant/geometry/potential_io.hpp"
#include "kquant/jet.hpp"

using namespace kquant;

namespace {

constexpr double kPi = std::numbers::pi;

double volume_error(GridMode mode, int n) {
  const QuadGrid g = build_grid(mode, n);
  double s = 0.0;
  for (double w : g.weight) s += w;
  return std::abs(s - 1.0);
}

Potential random_radial(std::mt19937_64& rng, double amp = 0.05) {
  std::uniform_real_distribution<double> d(-amp, amp);
  return Field::polynomial({0.0, d(rng), d(rng), d(rng), d(rng)});
}

Potential random_plane(std::mt19937_64& rng, double amp = 0.03) {
  std::uniform_real_distribution<double> d(-amp, amp);
  const double c1 = d(rng), c2 = d(rng), a1 = d(rng), b1 = d(rng), a2 = d(rng);
  return Field::general([=](const auto& u, const auto& t) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const auto q = u * (1.0 - u);
    return c1 * u + c2 * u * u + (a1 * cos(t) + b1 * sin(t)) * sqrt(q) * (1.0 + 0.5 * u) +
           a2 * cos(2.0 * t) * q;
  });
}

// Central second difference of a scalar function.
template <class F>
double d2(F f, double x, double h = 1e-4) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}
template <class F>
double d1(F f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

// ---------------------------------------------------------------- jets

TEST(Jet, ElementaryFunctionsMatchClosedFormDerivatives) {
  const double x = 0.37;
  const auto j = RJet::variable(x);
  const auto e = exp(j * 2.0);
  EXPECT_NEAR(e.derivative(3), 8.0 * std::exp(2 * x), 1e-12);
  const auto l = log(j);
  EXPECT_NEAR(l.derivative(4), -6.0 / std::pow(x, 4), 1e-9);
  const auto s = sin(j);
  EXPECT_NEAR(s.derivative(2), -std::sin(x), 1e-14);
  const auto q = ipow(j, 5);
  EXPECT_NEAR(q.derivative(4), 120.0 * x, 1e-12);
  const auto r = 1.0 / (1.0 + j * j);
  EXPECT_NEAR(r.derivative(1), -2 * x / std::pow(1 + x * x, 2), 1e-14);
}

TEST(Jet, NestedJetGivesMixedPartials) {
  // f = u^2 sin(t): f_{u t t} = -2 u sin t
  const PJet u = PJet::variable(Jet<4>(0.3));
  const PJet t(Jet<4>::variable(1.1));
  const PJet f = u * u * sin(t);
  EXPECT_NEAR(f.c[1].derivative(2), -2 * 0.3 * std::sin(1.1), 1e-14);
}

// ---------------------------------------------------------------- grids

TEST(BuildGrid, FullGridHasUnitVolume) { EXPECT_LE(volume_error(GridMode::full2d, 128), 1e-10); }

TEST(BuildGrid, RadialGridHasUnitVolume) { EXPECT_LE(volume_error(GridMode::radial, 1024), 1e-12); }

TEST(BuildGrid, VolumeErrorShrinksWithResolution) {
  // Gauss-Legendre is exact for the density (1 + r^2)^{-2} r dr once written in
  // u, so both errors are at rounding level; the ratio cannot exceed 4 there.
  const double e512 = volume_error(GridMode::radial, 512);
  const double e1024 = volume_error(GridMode::radial, 1024);
  EXPECT_LE(e1024, std::max(e512 / 4.0, 1e-14));
}

TEST(BuildGrid, IntegratesTheRadialDensityInR) {
  // Oracle: int_0^inf 2 r (1 + r^2)^{-2} f(r) dr with f = r^2 / (1 + r^2)^2
  // equals int_0^1 u (1 - u) du = 1/6.
  const QuadGrid g = build_grid(GridMode::radial, 64);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r2 = std::norm(g.z(i));
    s += g.weight[i] * r2 / ((1 + r2) * (1 + r2));
  }
  EXPECT_NEAR(s, 1.0 / 6.0, 1e-15);
}

TEST(BuildGrid, WeightsArePositive) {
  for (auto mode : {GridMode::radial, GridMode::full2d}) {
    const QuadGrid g = build_grid(mode, 16);
    for (double w : g.weight) EXPECT_GT(w, 0.0);
  }
}

TEST(BuildGrid, RejectsResolutionBelowMinimum) {
  EXPECT_THROW(build_grid(GridMode::radial, 7), std::invalid_argument);
  EXPECT_THROW(build_grid(GridMode::full2d, 0), std::invalid_argument);
}

TEST(BuildGrid, ModeNamesRoundTrip) {
  for (auto m : {GridMode::radial, GridMode::full2d}) EXPECT_EQ(grid_mode_from_string(to_string(m)), m);
  EXPECT_THROW(grid_mode_from_string("toric"), std::invalid_argument);
}

// ---------------------------------------------------------------- metric

TEST(MetricData, FubiniStudyHasScalarCurvatureTwo) {
  for (auto mode : {GridMode::radial, GridMode::full2d}) {
    const MetricData md = metric_data(Field::constant(0.0), make_grid(mode, 24));
    for (std::size_t i = 0; i < md.size(); ++i) {
      EXPECT_NEAR(md.scalar[i], 2.0, 1e-10);
      EXPECT_NEAR(md.density[i], 1.0, 1e-14);
    }
  }
}

TEST(MetricData, ConstantPotentialGivesBaseMetric) {
  const auto g = make_grid(GridMode::full2d, 16);
  const MetricData a = metric_data(Field::constant(0.0), g);
  const MetricData b = metric_data(Field::constant(3.7), g);
  EXPECT_EQ(a.density, b.density);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.scalar, b.scalar);
}

TEST(MetricData, GaussBonnetAndVolumeForRandomRadialPotentials) {
  std::mt19937_64 rng(11);
  const auto g = make_grid(GridMode::radial, 128);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricData md = metric_data(random_radial(rng), g);
    EXPECT_NEAR(md.volume(), 1.0, 1e-12);
    EXPECT_NEAR(md.integrate(md.scalar), 2.0, 1e-8);
  }
}

TEST(MetricData, GaussBonnetAndVolumeForNonInvariantPotentials) {
  std::mt19937_64 rng(12);
  const auto g = make_grid(GridMode::full2d, 48);
  for (int trial = 0; trial < 4; ++trial) {
    const MetricData md = metric_data(random_plane(rng), g);
    EXPECT_NEAR(md.volume(), 1.0, 1e-8);
    EXPECT_NEAR(md.integrate(md.scalar), 2.0, 1e-8);
  }
}

TEST(MetricData, CurvatureMatchesFiniteDifferenceOracle) {
  // Radial oracle: w = 1 + (u (1-u) phi')', S = (2 - (u (1-u) (log w)')') / w,
  // every derivative taken by central differences of plain evaluations.
  std::mt19937_64 rng(5);
  const Potential phi = random_radial(rng);
  auto f = [&](double u) { return phi(u); };
  auto w = [&](double u) { return 1.0 + d1([&](double x) { return x * (1 - x) * d1(f, x, 1e-4); }, u, 1e-4); };
  const auto g = make_grid(GridMode::radial, 16);
  const MetricData md = metric_data(phi, g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double u = g->u[i];
    if (u < 0.05 || u > 0.95) continue;
    const double wo = w(u);
    EXPECT_NEAR(md.density[i], wo, 1e-7);
    const double lap = d1([&](double x) { return x * (1 - x) * d1([&](double y) { return std::log(w(y)); }, x, 1e-3); },
                          u, 1e-3);
    EXPECT_NEAR(md.scalar[i], (2.0 - lap) / wo, 1e-4);
  }
}

TEST(MetricData, RejectsNonKahlerPotential) {
  // w = 1 + 2a (2u - 3u^2) is -1 at u = 1 for a = 1.
  const auto g = make_grid(GridMode::radial, 32);
  EXPECT_THROW(metric_data(Field::polynomial({0, 0, 1.0}), g), NonKahlerError);
  EXPECT_LT(min_density(Field::polynomial({0, 0, 1.0}), g), 0.0);
}

TEST(MetricData, RejectsNonInvariantPotentialOnRadialGrid) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(metric_data(random_plane(rng), make_grid(GridMode::radial, 16)), DomainError);
}

TEST(MetricData, LaplacianIntegratesToZeroAndIsSelfAdjoint) {
  std::mt19937_64 rng(3);
  const auto g = make_grid(GridMode::full2d, 40);
  const MetricData md = metric_data(random_plane(rng), g);
  const Field a = Field::general([](const auto& u, const auto& t) {
    using std::cos;
    return u * u + 0.3 * cos(t) * u * (1.0 - u);
  });
  const Field b = Field::general([](const auto& u, const auto& t) {
    using std::exp;
    using std::sin;
    return exp(0.5 * u) + 0.2 * sin(2.0 * t) * u * (1.0 - u);
  });
  const auto la = md.laplacian(a), lb = md.laplacian(b);
  EXPECT_NEAR(md.integrate(la), 0.0, 1e-10);
  const auto av = md.sample(a), bv = md.sample(b);
  double x = 0.0, y = 0.0;
  for (std::size_t i = 0; i < md.size(); ++i) {
    x += md.mu[i] * av[i] * lb[i];
    y += md.mu[i] * bv[i] * la[i];
  }
  EXPECT_LE(std::abs(x - y), 1e-7 * std::abs(x));
}

TEST(MetricData, LaplacianOfSquareMatchesProductRule) {
  std::mt19937_64 rng(4);
  const auto g = make_grid(GridMode::full2d, 16);
  const MetricData md = metric_data(random_plane(rng), g);
  const Field f = Field::general([](const auto& u, const auto& t) {
    using std::cos;
    return u + 0.4 * cos(t) * u * (1.0 - u);
  });
  const auto lf = md.laplacian(f), lf2 = md.laplacian(f * f), gf = md.grad_norm2(f), fv = md.sample(f);
  for (std::size_t i = 0; i < md.size(); ++i) EXPECT_NEAR(lf2[i], 2 * fv[i] * lf[i] - gf[i], 1e-11);
}

TEST(MetricData, LaplacianOfMomentIsEigenfunctionAtFubiniStudy) {
  // Delta_0 (u - 1/2) = 2 (u - 1/2): first eigenvalue on the unit-volume sphere.
  const auto g = make_grid(GridMode::radial, 16);
  const MetricData md = metric_data(Field::constant(0.0), g);
  const auto l = md.laplacian(Field::polynomial({-0.5, 1.0}));
  for (std::size_t i = 0; i < md.size(); ++i) EXPECT_NEAR(l[i], 2.0 * (g->u[i] - 0.5), 1e-13);
}

// ---------------------------------------------------------------- vector fields

TEST(HolomorphyPotential, RotationMomentAtFubiniStudy) {
  // Radial integration oracle of d theta / du = 1 / (2 pi) from g_0(V, .) = d theta.
  const auto g = make_grid(GridMode::radial, 64);
  const Field theta = holomorphy_potential(VectorField::rotation_moment_gradient(), Field::constant(0.0), g);
  const int n = 2000;
  std::vector<double> acc(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) acc[j] = acc[j - 1] + 1.0 / (2 * kPi) / n;
  double mean = 0.0;
  for (int j = 0; j <= n; ++j) mean += acc[j] * ((j == 0 || j == n) ? 0.5 : 1.0) / n;
  for (int j = 0; j <= n; j += 100) {
    const double u = double(j) / n;
    EXPECT_NEAR(theta(u), acc[j] - mean, 1e-12);
    EXPECT_NEAR(theta(u), (u - 0.5) / (2 * kPi), 1e-14);
  }
}

TEST(HolomorphyPotential, ZeroFieldGivesZero) {
  std::mt19937_64 rng(8);
  const auto g = make_grid(GridMode::radial, 32);
  const Field theta = holomorphy_potential(VectorField::zero(), random_radial(rng), g);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(theta(g->u[i]), 0.0);
}

TEST(HolomorphyPotential, HasMeanZeroAndSolvesDefiningEquation) {
  std::mt19937_64 rng(9);
  const auto g = make_grid(GridMode::radial, 64);
  for (int trial = 0; trial < 5; ++trial) {
    const Potential phi = random_radial(rng);
    const VectorField v{{0.5 + trial, 0.0}};
    const Field theta = holomorphy_potential(v, phi, g);
    const MetricData md = metric_data(phi, g);
    EXPECT_NEAR(md.integrate(md.sample(theta)), 0.0, 1e-10);
    // g_phi(V, .) = d theta: d theta / d xi = Re(rate) u (1 - u) w / (2 pi)
    for (std::size_t i = 0; i < g->size(); i += 7) {
      const double u = g->u[i];
      const double dxi = u * (1 - u) * d1([&](double x) { return theta(x); }, u, 1e-6);
      EXPECT_NEAR(dxi, v.rate.real() * u * (1 - u) * md.density[i] / (2 * kPi), 1e-8);
    }
  }
}

TEST(HolomorphyPotential, RejectsFieldWithoutGradientPotential) {
  const auto g = make_grid(GridMode::radial, 16);
  EXPECT_THROW(holomorphy_potential(VectorField::rotation(1.0), Field::constant(0.0), g), DomainError);
}

TEST(SigmaLift, ZeroFieldIsIdentity) {
  const auto s = sigma_lift(VectorField::zero(), 5, 2.3, 0.1);
  EXPECT_TRUE(s.is_identity());
  EXPECT_TRUE(s.section_matrix().isApprox(Eigen::MatrixXcd::Identity(6, 6), 0.0));
  const Field c = s.base_potential();
  for (double u : {0.0, 0.3, 1.0}) EXPECT_EQ(c(u), 0.0);
  EXPECT_EQ(s.point_map({0.4, -0.2}), std::complex<double>(0.4, -0.2));
}

TEST(SigmaLift, MatchesIntegratedFlow) {
  // RK4 for z' = (c0 / k) V(z) with V = z d/dz, from t = 0 to 1.
  const double c0 = 0.25;
  const int k = 4;
  const auto s = sigma_lift(VectorField::rotation_moment_gradient(), k, 1.0, c0);
  const std::complex<double> z0(0.7, 0.4);
  std::complex<double> z = z0;
  const int steps = 1000;
  const double h = 1.0 / steps;
  auto f = [&](std::complex<double> x) { return (c0 / k) * x; };
  for (int i = 0; i < steps; ++i) {
    const auto a = f(z), b = f(z + 0.5 * h * a), c = f(z + 0.5 * h * b), d = f(z + h * c);
    z += h / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  }
  EXPECT_LT(std::abs(s.point_map(z0) - z), 1e-13);
  const std::complex<double> lambda = z / z0;
  const Eigen::MatrixXcd m = s.section_matrix();
  for (int j = 0; j <= k; ++j) EXPECT_LT(std::abs(m(j, j) - std::pow(lambda, j)), 1e-12);
  EXPECT_NEAR(lambda.imag(), 0.0, 1e-15);
}

TEST(SigmaLift, OneParameterGroupLaw) {
  const VectorField v{{0.8, 0.3}};
  const auto a = sigma_lift(v, 6, 0.7, 0.5), b = sigma_lift(v, 6, -1.9, 0.5), ab = sigma_lift(v, 6, -1.2, 0.5);
  EXPECT_LT(std::abs(a.compose(b).lambda - ab.lambda), 1e-10);
  EXPECT_LT((a.section_matrix() * b.section_matrix() - ab.section_matrix()).norm(), 1e-10);
  EXPECT_LT(std::abs(a.compose(a.inverse()).lambda - 1.0), 1e-15);
}

TEST(SigmaLift, TimeDerivativeIsScaledField) {
  const VectorField v{{1.3, -0.4}};
  const int k = 7;
  const double c0 = 1.0 / (8 * kPi), h = 1e-5;
  for (auto z : {std::complex<double>(0.3, 0.1), std::complex<double>(-2.0, 1.5)}) {
    const auto fd = (sigma_lift(v, k, h, c0).point_map(z) - sigma_lift(v, k, -h, c0).point_map(z)) / (2 * h);
    EXPECT_LT(std::abs(fd - (c0 / k) * v.rate * z), 1e-10);
  }
}

TEST(SigmaLift, RotationIsUnitaryForBaseGram) {
  // Hilb_k(0) is diagonal, so a unitary section matrix preserves it.
  const auto s = sigma_lift(VectorField::rotation(2.0), 5, 1.0, 0.3);
  const Eigen::MatrixXcd m = s.section_matrix();
  EXPECT_LT((m * m.adjoint() - Eigen::MatrixXcd::Identity(6, 6)).norm(), 1e-14);
}

TEST(AutomorphismLift, BasePotentialPullsBackFubiniStudy) {
  // sigma^* omega_0 has density d(u o sigma)/du in u; compare with 1 + L(c_sigma).
  const AutomorphismLift s{{1.4, 0.3}, 3};
  const Field c = s.base_potential();
  const double m = std::norm(s.lambda);
  auto mu = [m](double u) { return m * u / (1 - u + m * u); };
  for (double u : {0.1, 0.35, 0.8}) {
    const RJet uj = RJet::variable(u);
    const double w = primal(detail::density(uj, c(uj)));
    EXPECT_NEAR(w, d1(mu, u), 1e-9);
  }
}

TEST(AutomorphismLift, PullbackEvaluatesAtImagePoint) {
  std::mt19937_64 rng(2);
  const Potential phi = random_plane(rng);
  const AutomorphismLift s{std::polar(1.3, 0.4), 3};
  const Field f = s.pullback(phi);
  const auto g = make_grid(GridMode::full2d, 8);
  for (std::size_t i = 0; i < g->size(); i += 5) {
    const auto w = s.point_map(g->z(i));
    const double uw = std::norm(w) / (1 + std::norm(w));
    EXPECT_NEAR(f(g->u[i], g->theta[i]), phi(uw, std::arg(w)), 1e-13);
  }
}

// ---------------------------------------------------------------- potential io

TEST(PotentialIo, ParsesCoefficientList) {
  std::istringstream in("# bump\ncoeffs 0 0.05 -0.03\n0.02 -0.01\n");
  const Potential p = read_potential(in);
  const double u = 0.3;
  EXPECT_NEAR(p(u), 0.05 * u - 0.03 * u * u + 0.02 * u * u * u - 0.01 * u * u * u * u, 1e-16);
}

TEST(PotentialIo, SamplesInterpolateSmoothFunctions) {
  const int n = 24;
  const auto pts = chebyshev_points(n);
  std::ostringstream os;
  os.precision(17);
  os << "samples " << n << "\n";
  for (double u : pts) os << 0.1 * std::sin(2 * u) << "\n";
  std::istringstream in(os.str());
  const Potential p = read_potential(in);
  for (double u : {0.0, 0.123, 0.5, 0.9, 1.0}) EXPECT_NEAR(p(u), 0.1 * std::sin(2 * u), 1e-14);
  const RJet uj = RJet::variable(0.4);
  EXPECT_NEAR(p(uj).derivative(2), -0.4 * std::sin(0.8), 1e-10);
}

TEST(PotentialIo, ReportsMalformedInputWithLine) {
  auto fails_at = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      read_potential(in);
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line, line) << e.what();
      return;
    }
    ADD_FAILURE() << "no ParseError for: " << text;
  };
  fails_at("coeffs 0 1\nx\n", 2);
  fails_at("\n\nfourier 1 2\n", 3);
  fails_at("samples 3\n1 2\n", 2);
  std::istringstream empty("");
  EXPECT_THROW(read_potential(empty), ParseError);
}
