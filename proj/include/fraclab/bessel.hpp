#pragma once

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "fraclab/errors.hpp"

namespace fraclab {

/// Bessel function of the first kind J_ν(x), x >= 0.
inline double bessel_j(double nu, double x) {
  if (x < 0.0) throw DomainError("bessel_j: x must be nonnegative");
  if (nu < 0.0) throw DomainError("bessel_j: order must be nonnegative");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(nu, x);
}

/// J_ν(x) x^{-ν}, continuous at x = 0 with value 1/(2^ν Γ(ν+1)).
inline double bessel_kernel(double nu, double x) {
  if (x < 1e-6) {
    const double c = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    return c * (1.0 - x * x / (4.0 * (nu + 1.0)));
  }
  return bessel_j(nu, x) * std::pow(x, -nu);
}

} // namespace fraclab
