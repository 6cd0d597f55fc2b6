#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fraclab/radial_spectral.hpp"

namespace fraclab::profiles {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double gaussian(double r, double width = 1.0) { return std::exp(-0.5 * (r * r) / (width * width)); }

/// exp(-1/(1 - (r/ρ)²)) on r < ρ, zero outside.
inline double bump(double r, double rho = 1.0) {
  const double x = r / rho;
  if (x >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

/// Generalized Laguerre polynomial L_j^{(α)}(x) by the three-term recurrence.
inline double laguerre(int j, double alpha, double x) {
  double prev = 1.0;
  if (j == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < j; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// L_j^{(ν)}(r²) e^{-r²/2}: eigenfunction of the radial transform in R^{2ν+2} with eigenvalue (-1)^j.
inline double laguerre_gauss(int j, double nu, double r) { return laguerre(j, nu, r * r) * std::exp(-0.5 * r * r); }

/// Seeded combination Σ_{j<terms} c_j φ_j(r / scale) with c_j uniform in [-1, 1) and scale in [0.7, 1.4).
struct BandLimited {
  std::vector<double> coeffs;
  double scale = 1.0;
  double nu = 0.0;

  double operator()(double r) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * laguerre_gauss(static_cast<int>(j), nu, r / scale);
    return acc;
  }
};

inline BandLimited band_limited(std::uint64_t seed, int n, int terms = 6) {
  std::mt19937_64 rng(seed);
  BandLimited b;
  b.nu = 0.5 * n - 1.0;
  b.coeffs.resize(static_cast<std::size_t>(terms));
  for (double& c : b.coeffs) c = 2.0 * uniform01(rng) - 1.0;
  b.scale = 0.7 + 0.7 * uniform01(rng);
  return b;
}

struct FamilyMember {
  std::string id;
  RadialProfile profile;
};

/// Closed-form member of a survey family.
struct Generator {
  std::string id;
  std::function<double(double)> f;
};

/// Named survey family: Gaussians with five widths, bumps with five radii, `random_count`
/// seeded band-limited profiles (seed + index).
inline std::vector<Generator> standard_generators(int n, std::uint64_t seed, int random_count = 10) {
  std::vector<Generator> out;
  for (double w : {0.5, 0.75, 1.0, 1.5, 2.0})
    out.push_back({"gauss_w" + std::to_string(w).substr(0, 4), [w](double r) { return gaussian(r, w); }});
  for (double rho : {2.0, 3.0, 4.0, 5.0, 6.0})
    out.push_back({"bump_r" + std::to_string(static_cast<int>(rho)), [rho](double r) { return bump(r, rho); }});
  for (int k = 0; k < random_count; ++k)
    out.push_back({"band_" + std::to_string(k), band_limited(seed + static_cast<std::uint64_t>(k), n)});
  return out;
}

inline std::vector<FamilyMember> standard_family(const RadialGrid& grid, int n, std::uint64_t seed, int random_count = 10) {
  std::vector<FamilyMember> out;
  for (auto& g : standard_generators(n, seed, random_count)) out.push_back({g.id, RadialProfile::sample(grid, n, g.f)});
  return out;
}

} // namespace fraclab::profiles
