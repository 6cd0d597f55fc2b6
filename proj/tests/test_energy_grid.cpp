#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/energy_grid.hpp"
#include "fraclab/profiles.hpp"
#include "fraclab/radial_spectral.hpp"

using namespace fraclab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> random_masked(const GridSpec& sp, std::mt19937_64& rng, double lo, double hi) {
  const auto m = sp.mask();
  std::vector<double> v(sp.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (m[k]) v[k] = lo + (hi - lo) * profiles::uniform01(rng);
  return v;
}

GridFunction radial_sample(const GridSpec& sp, double (*f)(double)) {
  return GridFunction::sample(sp, [f](double x, double y) { return f(std::hypot(x, y)); });
}

double bump1(double r) { return profiles::bump(r, 1.0); }
double gauss_narrow(double r) { return std::exp(-2.0 * r * r); }

} // namespace

TEST(Energy, ZeroFunctionGivesZero) {
  const auto sp = GridSpec::covering(2.0, 0.25);
  const auto r = energy(GridFunction(sp), ProblemParams{});
  EXPECT_EQ(r.gagliardo_sq, 0.0);
  EXPECT_EQ(r.lower_order, 0.0);
  EXPECT_EQ(r.constraint, 0.0);
  EXPECT_EQ(r.energy, 0.0);
  const auto g = energy_gradient(GridFunction(sp), ProblemParams{});
  for (double v : g.values()) EXPECT_EQ(v, 0.0);
}

TEST(Energy, QuadraticScalingForQEqualsTwo) {
  const auto sp = GridSpec::covering(2.0, 0.125);
  std::mt19937_64 rng(5);
  const GridFunction u(sp, random_masked(sp, rng, -1, 1));
  const auto base = energy(u, ProblemParams{});
  for (double c : {-3.0, 0.1, 7.0}) {
    const auto r = energy(u.scaled(c), ProblemParams{});
    EXPECT_NEAR(r.gagliardo_sq, c * c * base.gagliardo_sq, 1e-12 * c * c * base.gagliardo_sq);
    EXPECT_NEAR(r.lower_order, c * c * base.lower_order, 1e-12 * c * c * base.lower_order);
  }
}

TEST(Energy, ReportIsBookkeepingExact) {
  const auto sp = GridSpec::covering(3.0, 0.125);
  std::mt19937_64 rng(6);
  const GridFunction u(sp, random_masked(sp, rng, -0.5, 1));
  const auto r = energy(u, ProblemParams{});
  EXPECT_EQ(r.breakdown.interior + r.breakdown.exterior, r.gagliardo_sq);
  EXPECT_EQ(r.gagliardo_sq + r.lower_order, r.energy);
  EXPECT_GT(r.breakdown.interior, 0);
  EXPECT_GT(r.breakdown.exterior, 0);
  EXPECT_GT(r.constraint, 0);
}

TEST(Gagliardo, DirectAndConvolutionAgree) {
  std::mt19937_64 rng(7);
  for (double s : {0.3, 0.75, 0.9}) {
    const auto sp = GridSpec::covering(2.0, 0.1, 0.05, -0.1);
    const GridFunction u(sp, random_masked(sp, rng, -1, 1));
    const double d = gagliardo_grid(u, s, GagliardoMode::direct);
    const double c = gagliardo_grid(u, s, GagliardoMode::convolution);
    EXPECT_LE(rel(d, c), 1e-10) << s;
    EXPECT_NO_THROW(gagliardo_grid(u, s, GagliardoMode::checked));
  }
}

TEST(Gagliardo, PositiveDefiniteOnTheMask) {
  const auto sp = GridSpec::covering(1.5, 0.125);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 5; ++k) {
    const GridFunction u(sp, random_masked(sp, rng, -1, 1));
    EXPECT_GT(gagliardo_grid(u, 0.75), 0.0);
  }
  GridFunction spike(sp);
  spike.set(sp.N / 2, sp.N / 2, 1.0);
  EXPECT_GT(gagliardo_grid(spike, 0.75), 0.0);
}

TEST(Gagliardo, MatchesSpectralSeminormOnSmoothRadialFunctions) {
  const double s = 0.75;
  const auto sp = GridSpec::covering(4.0, 1.0 / 16.0);
  for (auto f : {bump1, gauss_narrow}) {
    const double spectral = std::pow(gagliardo_radial(RadialProfile::sample(default_radial_grid(), 2, f), s), 2);
    EXPECT_LE(rel(gagliardo_grid(radial_sample(sp, f), s), spectral), 0.02);
  }
}

TEST(Gagliardo, ExteriorKernelClosedFormAtCentre) {
  for (double R : {1.0, 4.0})
    for (double s : {0.25, 0.75}) EXPECT_NEAR(exterior_kernel(0.0, R, 2, s), std::numbers::pi * std::pow(R, -2 * s) / s, 1e-14);
  EXPECT_THROW(exterior_kernel(1.0, 1.0, 2, 0.75), DomainError);
}

TEST(WeightedIntegral, DiscArea) {
  for (double h : {0.1, 0.05}) {
    const auto sp = GridSpec::covering(3.0, h);
    const auto one = GridFunction::sample(sp, [](double, double) { return 1.0; });
    const double area = weighted_integral_grid(one, 1.0, 0.0, false);
    EXPECT_NEAR(area, std::numbers::pi * 9.0, 2.0 * std::numbers::pi * 3.0 * h);
  }
}

TEST(WeightedIntegral, PositivePartOfNonpositiveIsZero) {
  const auto sp = GridSpec::covering(2.0, 0.1);
  std::mt19937_64 rng(9);
  const GridFunction u(sp, random_masked(sp, rng, -1, 0));
  EXPECT_EQ(weighted_integral_grid(u, 3.0, 1.0, true), 0.0);
  EXPECT_GT(weighted_integral_grid(u, 3.0, 1.0, false), 0.0);
  EXPECT_THROW(weighted_integral_grid(u, 2.0, -2.0, false), DomainError);
}

TEST(WeightedIntegral, GaussianAgainstPolarQuadrature) {
  // ∫_{B_4} |x| e^{-|x|²} dx = 2π ∫_0^4 r² e^{-r²} dr.
  using boost::math::quadrature::gauss_kronrod;
  const double oracle = 2 * std::numbers::pi *
                        gauss_kronrod<double, 61>::integrate([](double r) { return r * r * std::exp(-r * r); }, 0.0, 4.0, 10, 1e-14);
  const auto sp = GridSpec::covering(4.0, 1.0 / 16.0);
  const auto u = GridFunction::sample(sp, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
  EXPECT_LE(rel(weighted_integral_grid(u, 2.0, 1.0, false), oracle), 1e-3);
}

TEST(EnergyGradient, CentralDifferences) {
  const ProblemParams prm;
  const auto sp = GridSpec::covering(2.0, 0.125);
  const GridEnergy E(sp, prm);
  std::mt19937_64 rng(10);
  for (int k = 0; k < 10; ++k) {
    const auto u = random_masked(sp, rng, 0.1, 1);
    const auto v = random_masked(sp, rng, -1, 1);
    const double eps = 1e-5;
    auto at = [&](double t) {
      auto w = u;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += t * v[i];
      return E.report(w).energy;
    };
    const double fd = (at(eps) - at(-eps)) / (2 * eps);
    const auto g = E.gradient(u);
    double an = 0;
    for (std::size_t i = 0; i < g.size(); ++i) an += g[i] * v[i];
    EXPECT_LE(rel(an, fd), 1e-5) << k;
  }
}

TEST(EnergyGradient, ConstraintGradientCentralDifferences) {
  const ProblemParams prm;
  const auto sp = GridSpec::covering(2.0, 0.125);
  const GridEnergy E(sp, prm);
  std::mt19937_64 rng(11);
  const auto u = random_masked(sp, rng, 0.1, 1);
  const auto v = random_masked(sp, rng, -0.05, 0.05);
  const double eps = 1e-5;
  auto at = [&](double t) {
    auto w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += t * v[i];
    return E.constraint(w);
  };
  const auto g = E.constraint_gradient(u);
  double an = 0;
  for (std::size_t i = 0; i < g.size(); ++i) an += g[i] * v[i];
  EXPECT_LE(rel(an, (at(eps) - at(-eps)) / (2 * eps)), 1e-7);
}

TEST(EnergyGradient, RadialInputGivesLatticeSymmetricGradient) {
  // The discrete kernel is invariant under the eight lattice symmetries, not under all rotations;
  // a radial input therefore gives a gradient with exactly that symmetry, and its radialization
  // is a fixed point of the radial projection.
  const auto sp = GridSpec::covering(2.0, 0.125);
  const auto g = energy_gradient(radial_sample(sp, gauss_narrow), ProblemParams{});
  const std::size_t N = sp.N;
  double scale = 0;
  for (double v : g.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const double v = g(i, j);
      EXPECT_NEAR(g(j, i), v, 1e-12 * scale);
      EXPECT_NEAR(g(N - 1 - i, j), v, 1e-12 * scale);
      EXPECT_NEAR(g(i, N - 1 - j), v, 1e-12 * scale);
    }
  const auto pg = radial_average(g);
  const auto ppg = radial_average(pg);
  for (std::size_t k = 0; k < sp.size(); ++k) EXPECT_NEAR(ppg.values()[k], pg.values()[k], 1e-10 * scale);
}

TEST(RadialAverage, IdempotentAndContracting) {
  const auto sp = GridSpec::covering(3.0, 0.1);
  std::mt19937_64 rng(12);
  const GridFunction u(sp, random_masked(sp, rng, -1, 1));
  const auto a = radial_average(u);
  const auto aa = radial_average(a);
  EXPECT_EQ(aa.values(), a.values());
  EXPECT_LE(a.l2_norm(), u.l2_norm());
}

TEST(RadialAverage, RadialDataIsAFixedPoint) {
  const auto sp = GridSpec::covering(3.0, 0.1);
  // Sampled through the exact class radius, so every class holds one value.
  GridFunction u(sp);
  for (std::size_t i = 0; i < sp.N; ++i)
    for (std::size_t j = 0; j < sp.N; ++j) u.set(i, j, gauss_narrow(sp.radius_from_key(sp.radius_key(i, j))));
  const auto a = radial_average(u);
  EXPECT_EQ(a.values(), u.values());
}

TEST(RadialAverage, ClassesShareOneExactRadius) {
  const auto sp = GridSpec::covering(2.0, 0.25);
  const RadialClasses rc(sp);
  for (std::size_t i = 0; i < sp.N; ++i)
    for (std::size_t j = 0; j < sp.N; ++j) {
      const int c = rc.class_of(i * sp.N + j);
      if (c < 0) continue;
      EXPECT_EQ(rc.keys()[static_cast<std::size_t>(c)], sp.radius_key(i, j));
    }
}
