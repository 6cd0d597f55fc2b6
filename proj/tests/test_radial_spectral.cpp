#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/bessel.hpp"
#include "fraclab/profiles.hpp"
#include "fraclab/radial_spectral.hpp"

using namespace fraclab;

namespace {

// 40-term power series of J_0, summed independently of the library.
double j0_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= -(x * x / 4.0) / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double l2_radial(const RadialProfile& u) {
  std::vector<double> sq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u.values[i] * u.values[i];
  return std::sqrt(sphere_area(u.n) * u.grid.integrate(sq, u.n - 1.0));
}

RadialProfile gaussian_profile(int n = 2, double w = 1.0) {
  return RadialProfile::sample(default_radial_grid(), n, [w](double r) { return profiles::gaussian(r, w); });
}

} // namespace

TEST(Bessel, ValueAtOrigin) {
  EXPECT_EQ(bessel_j(0, 0), 1.0);
  EXPECT_EQ(bessel_j(1, 0), 0.0);
  EXPECT_THROW(bessel_j(0, -1), DomainError);
}

TEST(Bessel, FirstZeroIsSignChangeOfSeries) {
  double lo = 2.0, hi = 3.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(0, lo) * bessel_j(0, mid) <= 0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(lo, 2.404825557695773, 1e-12);
  EXPECT_LT(j0_series(lo - 1e-9) * j0_series(hi + 1e-9), 0.0);
}

TEST(Bessel, AgreesWithSeriesAtModerateArguments) {
  for (double x = 0.1; x < 8; x += 0.37) EXPECT_NEAR(bessel_j(0, x), j0_series(x), 1e-10);
}

TEST(Bessel, DecayBound) {
  double worst = 0;
  for (double x = 1; x <= 1000; x += 0.05) worst = std::max(worst, std::sqrt(x) * std::abs(bessel_j(0, x)));
  EXPECT_LE(worst, 1 + 1e-6);
}

TEST(Bessel, KernelContinuousAtOrigin) {
  for (double nu : {0.0, 0.5, 1.0, 1.5}) EXPECT_NEAR(bessel_kernel(nu, 1e-7), bessel_kernel(nu, 2e-6), 1e-11);
}

TEST(Hankel, GaussianIsFixedPoint) {
  for (int n : {2, 3, 5}) {
    const auto uh = hankel_transform(gaussian_profile(n));
    for (std::size_t j = 0; j < uh.size(); ++j) EXPECT_NEAR(uh.values[j], profiles::gaussian(uh.grid[j]), 1e-6);
  }
}

TEST(Hankel, DiscIndicatorAgainstCartesianQuadrature) {
  // û(ρ) = (1/2π) ∫_{|x|<1} e^{-i ρ x_1} dx = (1/π) ∫_{-1}^{1} cos(ρ x) sqrt(1 - x²) dx.
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> r;
  for (int i = 0; i <= 4000; ++i) r.push_back(i * 2.0 / 4000);
  const auto g = RadialGrid::from_points(r);
  // A disc has slowly decaying spectrum; compare the low-frequency values only.
  const auto u = RadialProfile::sample(g, 2, [](double x) { return x < 1.0 ? 1.0 : (x == 1.0 ? 0.5 : 0.0); });
  const auto wg = RadialGrid::from_points({0.5, 1.0, 2.0, 3.0});
  const auto uh = hankel_transform(u, wg);
  for (std::size_t j = 0; j < wg.size(); ++j) {
    const double rho = wg[j];
    auto f = [rho](double x) { return std::cos(rho * x) * std::sqrt(1 - x * x); };
    const double oracle = gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 20, 1e-13) / std::numbers::pi;
    EXPECT_NEAR(uh.values[j], oracle, 2e-4) << rho;
    EXPECT_NEAR(oracle, bessel_j(1, rho) / rho, 1e-10);
  }
}

TEST(Hankel, RoundTripAndPlancherelOnBandLimitedFamily) {
  for (int k = 0; k < 10; ++k) {
    const auto u = RadialProfile::sample(default_radial_grid(), 2, profiles::band_limited(500 + k, 2));
    const auto uh = hankel_transform(u);
    const auto back = hankel_inverse(uh, u.grid);
    auto d = u;
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] = back.values[i] - u.values[i];
    EXPECT_LE(l2_radial(d) / l2_radial(u), 1e-6);
    EXPECT_NEAR(l2_radial(uh) / l2_radial(u), 1.0, 1e-6);
  }
}

TEST(Hankel, GaussianRoundTripPointwise) {
  const auto u = gaussian_profile();
  const auto back = hankel_inverse(hankel_transform(u), u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(back.values[i], u.values[i], 1e-6);
}

TEST(Hankel, ZeroMapsToZero) {
  const auto z = RadialProfile::sample(default_radial_grid(), 2, [](double) { return 0.0; });
  for (double v : hankel_transform(z).values) EXPECT_EQ(v, 0.0);
}

TEST(Hankel, UnresolvedProfileRaisesTruncationError) {
  const auto slow = RadialProfile::sample(default_radial_grid(), 2, [](double r) { return 1.0 / (1.0 + r); });
  EXPECT_THROW(hankel_transform(slow), TruncationError);
}

TEST(Profile, NuIsDerivedFromDimension) {
  EXPECT_EQ(gaussian_profile(2).nu(), 0.0);
  EXPECT_EQ(gaussian_profile(5).nu(), 1.5);
}

TEST(Gagliardo, OrderZeroIsL2Norm) {
  const auto u = RadialProfile::sample(default_radial_grid(), 2, profiles::band_limited(3, 2));
  EXPECT_NEAR(gagliardo_radial(u, 0.0), l2_radial(u), 1e-8 * l2_radial(u));
}

TEST(Gagliardo, GaussianClosedForm) {
  // [e^{-r²/2}]² = ∫ |ω|^{2s} e^{-|ω|²} dω = π Γ(1 + s) in two dimensions.
  for (double s : {0.25, 0.5, 0.75}) {
    const double v = gagliardo_radial(gaussian_profile(), s);
    EXPECT_NEAR(v * v, std::numbers::pi * std::tgamma(1 + s), 1e-8);
  }
}

TEST(Gagliardo, MonotoneInSForHighFrequencyProfile) {
  // Laguerre–Gauss eigenfunctions are their own transforms; this one has most energy at |ω| >= 1.
  const auto u = RadialProfile::sample(default_radial_grid(), 2, [](double r) { return profiles::laguerre_gauss(4, 0, r / 0.3); });
  double prev = 0;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double v = gagliardo_radial(u, s);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(WeightedNorm, DiscArea) {
  std::vector<double> r;
  for (int i = 0; i <= 20000; ++i) r.push_back(i * 2.0 / 20000);
  const auto g = RadialGrid::from_points(r);
  const auto u = RadialProfile::sample(g, 2, [](double x) { return x <= 1.0 ? 1.0 : 0.0; });
  EXPECT_NEAR(weighted_norm_radial(u, 2, 0), std::sqrt(std::numbers::pi), 2e-4);
}

TEST(WeightedNorm, Homogeneous) {
  const auto u = gaussian_profile();
  EXPECT_NEAR(weighted_norm_radial(u.scaled(-3.0), 2.5, 0.5), 3.0 * weighted_norm_radial(u, 2.5, 0.5), 1e-13);
}

TEST(WeightedNorm, GaussianAgainstCartesianQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  auto inner = [](double x) {
    auto f = [x](double y) { return (x * x + y * y) * std::exp(-(x * x + y * y)); };
    return gauss_kronrod<double, 61>::integrate(f, -12.0, 12.0, 15, 1e-13);
  };
  const double oracle = std::sqrt(gauss_kronrod<double, 61>::integrate(inner, -12.0, 12.0, 15, 1e-13));
  EXPECT_NEAR(weighted_norm_radial(gaussian_profile(), 2, 2), oracle, 1e-4 * oracle);
}

TEST(WeightedNorm, RejectsNonIntegrableWeight) { EXPECT_THROW(weighted_norm_radial(gaussian_profile(), 2, -2), DomainError); }

TEST(Split, ReconstructionIsExact) {
  const auto u = RadialProfile::sample(default_radial_grid(), 2, profiles::band_limited(8, 2));
  const auto sp = frequency_split(u, 0.3);
  EXPECT_EQ(sp.multiplier_id, kCutoffPsiId);
  for (std::size_t i = 0; i < u.size(); ++i)
    EXPECT_NEAR(sp.low.values[i] + sp.high.values[i], u.values[i], 4e-16 * std::max(1.0, std::abs(u.values[i])));
}

TEST(Split, HighPartVanishesAsTShrinks) {
  const auto u = gaussian_profile();
  const double h1 = l2_radial(frequency_split(u, 0.2).high);
  const double h2 = l2_radial(frequency_split(u, 0.05).high);
  EXPECT_LT(h2, 1e-6 * l2_radial(u));
  EXPECT_LT(h2, h1);
}

TEST(Split, HighPartBoundHasStableConstant) {
  // ‖h‖_∞ ≤ C |x|^{-(n-1)/2} t^{s-1/2} [u]: fit C over t and check it stays within ±20%.
  // A Gaussian's high part is at round-off level, so the profile is built from a spectrum
  // just above the critical decay |û| ~ ω^{-(n/2+s)}, tapered to sit inside the frequency grid.
  const double s = 0.75;
  const auto uh = RadialProfile::sample(default_frequency_grid(), 2, [](double w) {
    return std::pow(1.0 + w * w, -0.925) * cutoff_psi(w / 80.0);
  });
  const auto u = hankel_inverse(uh, default_radial_grid());
  const double semi = gagliardo_radial(u, s);
  std::vector<double> C;
  for (double t : {0.1, 0.2, 0.4}) {
    const auto h = frequency_split(u, t).high;
    double c = 0;
    for (std::size_t i = 4; i < h.size(); ++i)
      c = std::max(c, std::abs(h.values[i]) * std::sqrt(h.grid[i]) / (std::pow(t, s - 0.5) * semi));
    C.push_back(c);
  }
  const double lo = *std::min_element(C.begin(), C.end()), hi = *std::max_element(C.begin(), C.end());
  EXPECT_LE(hi / lo, 1.2 / 0.8);
  EXPECT_THROW(frequency_split(u, 0.0), DomainError);
}

TEST(Strauss, AmplitudeInvariance) {
  const ProblemParams prm;
  const auto u = gaussian_profile();
  const double r0 = strauss_ratio(u, prm);
  for (double c : {1e-3, 3.0, 1e5}) EXPECT_NEAR(strauss_ratio(u.scaled(c), prm), r0, 1e-12 * r0);
}

TEST(Strauss, DilationInvariance) {
  const ProblemParams prm;
  const auto b = profiles::band_limited(21, 2);
  const double r0 = strauss_ratio(RadialProfile::sample(default_radial_grid(), 2, b), prm);
  for (double lam : {0.5, 2.0, 4.0}) {
    const auto ul = RadialProfile::sample(default_radial_grid(), 2, [&](double r) { return b(lam * r); });
    EXPECT_NEAR(strauss_ratio(ul, prm), r0, 1e-3 * r0) << lam;
  }
}

TEST(Strauss, FiniteAtTwoOrders) {
  ProblemParams prm;
  for (double s : {0.75, 0.95}) {
    prm.s = s;
    const double r = strauss_ratio(gaussian_profile(), prm);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GT(r, 0);
  }
}

TEST(Strauss, RequiresOrderAboveOneHalf) {
  ProblemParams prm;
  prm.s = 0.4;
  EXPECT_THROW(strauss_ratio(gaussian_profile(), prm), DomainError);
}

TEST(Strauss, ZeroProfileIsDomainError) {
  const auto z = RadialProfile::sample(default_radial_grid(), 2, [](double) { return 0.0; });
  EXPECT_THROW(strauss_ratio(z, ProblemParams{}), DomainError);
}

TEST(Holder, ConstantProfileGivesZero) {
  const auto c = RadialProfile::sample(RadialGrid::softplus(1e-3, 8, 200), 2, [](double) { return 1.0; });
  EXPECT_EQ(holder_ratio(c, ProblemParams{}, 0.5), 0.0);
}

TEST(Holder, AmplitudeInvarianceAndFiniteOnFamily) {
  const ProblemParams prm;
  for (const auto& m : profiles::standard_family(default_radial_grid(), 2, 7)) {
    const double r = holder_ratio(m.profile, prm, 0.5);
    EXPECT_TRUE(std::isfinite(r)) << m.id;
    EXPECT_GT(r, 0) << m.id;
    if (m.id == "gauss_w1.00") {
      EXPECT_NEAR(holder_ratio(m.profile.scaled(4.0), prm, 0.5), r, 1e-12 * r);
    }
  }
}

TEST(Holder, NeedsTwoPoints) {
  EXPECT_THROW(holder_ratio(gaussian_profile(), ProblemParams{}, 100.0), DomainError);
}

TEST(ProfileCsv, RoundTrip) {
  const auto u = gaussian_profile();
  std::stringstream ss;
  write_profile_csv(ss, u);
  const auto v = read_profile_csv(ss, 2);
  ASSERT_EQ(v.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(v.grid[i], u.grid[i]);
    EXPECT_EQ(v.values[i], u.values[i]);
  }
}

TEST(CutoffPsi, Shape) {
  EXPECT_EQ(cutoff_psi(0.0), 1.0);
  EXPECT_EQ(cutoff_psi(0.5), 1.0);
  EXPECT_EQ(cutoff_psi(1.0), 0.0);
  double prev = 1.0;
  for (double x = 0.5; x <= 1.0; x += 0.01) {
    EXPECT_LE(cutoff_psi(x), prev);
    prev = cutoff_psi(x);
  }
}
