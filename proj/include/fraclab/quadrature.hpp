#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fraclab/errors.hpp"

namespace fraclab {

/// Surface measure of the unit sphere S^{d-1} in R^d (|S^0| = 2).
inline double sphere_area(int d) {
  if (d < 1) throw DomainError("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace detail {

/// ∫_0^∞ (1 - cos t) t^{-1-2s} dt, split at 1 and at T = 2πm.
inline double one_minus_cos_moment(double s, int refinement) {
  using boost::math::quadrature::gauss_kronrod;
  const double beta = 1.0 + 2.0 * s;

  // [0, 1]: termwise integration of the cosine series.
  double head = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double term = 1.0 / (boost::math::factorial<double>(2 * k) * (2.0 * k - 2.0 * s));
    head += (k % 2 == 1) ? term : -term;
  }

  // [1, T]: Gauss–Kronrod panels, `per_half` panels per half period.
  const int m = 20 * refinement;
  const double T = 2.0 * std::numbers::pi * m;
  const int per_half = 2 * refinement;
  const double pi = std::numbers::pi;
  auto f = [beta](double t) { return (1.0 - std::cos(t)) * std::pow(t, -beta); };
  double body = gauss_kronrod<double, 31>::integrate(f, 1.0, pi, 0, 1e-14);
  const int panels = (2 * m - 1) * per_half;
  const double w = pi / per_half;
  for (int i = 0; i < panels; ++i) {
    const double lo = pi + i * w;
    body += gauss_kronrod<double, 31>::integrate(f, lo, lo + w, 0, 1e-14);
  }

  // [T, ∞): exact power tail minus the cosine tail by repeated integration by parts.
  const double cos_tail = beta * std::pow(T, -beta - 1.0) - beta * (beta + 1.0) * (beta + 2.0) * std::pow(T, -beta - 3.0);
  const double tail = std::pow(T, -2.0 * s) / (2.0 * s) - cos_tail;
  return head + body + tail;
}

/// ∫_{S^{n-1}} |θ_1|^{2s} dθ.
inline double angular_moment(int n, double s) {
  if (n == 1) return 2.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto g = [n, s](double phi) { return std::pow(std::cos(phi), 2.0 * s) * std::pow(std::sin(phi), n - 2); };
  const double half = ts.integrate(g, 0.0, std::numbers::pi / 2);
  return sphere_area(n - 1) * 2.0 * half;
}

} // namespace detail

/// C(n,s) = (∫_{R^n} (1 - cos ζ_1)/|ζ|^{n+2s} dζ)^{-1}, by quadrature in polar coordinates.
/// `refinement` scales the panel count and the oscillatory cut-off together.
inline double normalization_constant(int n, double s, int refinement = 1) {
  if (n < 1) throw DomainError("normalization_constant: n must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("normalization_constant: s must lie in (0, 1)");
  if (s < 0.05 || s > 0.95) throw RangeError("normalization_constant: s outside [0.05, 0.95], integral degenerates");
  if (refinement < 1) throw DomainError("normalization_constant: refinement must be >= 1");
  return 1.0 / (detail::one_minus_cos_moment(s, refinement) * detail::angular_moment(n, s));
}

/// Epstein zeta of the square lattice, Σ'_{(i,j) ∈ Z²} (i² + j²)^{-σ}, analytically continued to 0 < σ < 1.
inline double epstein_zeta_square(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("epstein_zeta_square: requires 0 < sigma < 1");
  const double pi = std::numbers::pi;
  double sum = -1.0 / sigma - 1.0 / (1.0 - sigma);
  const int K = 8;  // terms with |k|² > 64 are below e^{-200}
  for (int i = -K; i <= K; ++i)
    for (int j = -K; j <= K; ++j) {
      if (i == 0 && j == 0) continue;
      const double x = pi * (i * i + j * j);
      sum += boost::math::tgamma(sigma, x) * std::pow(x, -sigma) + boost::math::tgamma(1.0 - sigma, x) * std::pow(x, sigma - 1.0);
    }
  return sum * std::pow(pi, sigma) / std::tgamma(sigma);
}

} // namespace fraclab
