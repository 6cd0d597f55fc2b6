#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fraclab/bessel.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/params.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/radial_grid.hpp"

namespace fraclab {

inline RadialGrid default_radial_grid() { return RadialGrid::softplus(1e-3, 64.0, 2048); }
inline RadialGrid default_frequency_grid() { return RadialGrid::softplus(1e-3, 96.0, 3072); }

/// Radial function u(x) = u_0(|x|) in R^n sampled on a radius grid.
struct RadialProfile {
  RadialGrid grid;
  std::vector<double> values;
  int n = 2;

  RadialProfile() = default;
  RadialProfile(RadialGrid g, std::vector<double> v, int dim) : grid(std::move(g)), values(std::move(v)), n(dim) {
    if (values.size() != grid.size()) throw DomainError("RadialProfile: value count does not match grid");
    if (n < 1) throw DomainError("RadialProfile: dimension must be >= 1");
    for (double x : values)
      if (!std::isfinite(x)) throw DomainError("RadialProfile: nonfinite value");
  }

  template <class F>
  static RadialProfile sample(const RadialGrid& g, int dim, F&& f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
    return RadialProfile(g, std::move(v), dim);
  }

  double nu() const { return 0.5 * n - 1.0; }
  const std::vector<double>& radii() const { return grid.radii(); }
  std::size_t size() const { return values.size(); }

  RadialProfile scaled(double c) const {
    RadialProfile out = *this;
    for (double& v : out.values) v *= c;
    return out;
  }
};

// ---------------------------------------------------------------------------
// Hankel transform

namespace detail {

/// Dense kernel K[j][i] = w_i r_i^{n-1} J_ν(ω_j r_i)(ω_j r_i)^{-ν}, cached per (source, target, n).
class HankelCache {
public:
  using Matrix = std::vector<double>;

  static HankelCache& instance() {
    static HankelCache cache;
    return cache;
  }

  std::shared_ptr<const Matrix> get(const RadialGrid& src, const RadialGrid& dst, int n) {
    const Key key{src.fingerprint(), dst.fingerprint(), n};
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    auto m = std::make_shared<Matrix>(build(src, dst, n));
    if (entries_.size() >= kMaxEntries) entries_.erase(entries_.begin());
    entries_.emplace(key, m);
    return m;
  }

private:
  using Key = std::tuple<std::uint64_t, std::uint64_t, int>;
  static constexpr std::size_t kMaxEntries = 8;

  static Matrix build(const RadialGrid& src, const RadialGrid& dst, int n) {
    const double nu = 0.5 * n - 1.0;
    const auto w = src.moment_weights(n - 1.0);
    const std::size_t M = src.size(), P = dst.size();
    Matrix K(M * P);
    // On [0, r_0] the kernel is integrated exactly: ∫ r^{n-1} J_ν(ωr)(ωr)^{-ν} dr = r_0^n J_{ν+1}(ωr_0)(ωr_0)^{-ν-1}.
    const double r0 = src[0], cap = std::pow(r0, n) / n, w0 = w[0] - cap;
    for (std::size_t j = 0; j < P; ++j) {
      for (std::size_t i = 0; i < M; ++i) K[j * M + i] = w[i] * bessel_kernel(nu, dst[j] * src[i]);
      K[j * M] = w0 * bessel_kernel(nu, dst[j] * r0) + std::pow(r0, n) * bessel_kernel(nu + 1.0, dst[j] * r0);
    }
    return K;
  }

  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const Matrix>> entries_;
};

/// Fraction of the L² mass carried by the outermost tenth of the grid points.
inline double tail_mass_fraction(const RadialProfile& u) {
  const auto w = u.grid.moment_weights(u.n - 1.0);
  const std::size_t M = u.size();
  const std::size_t first_tail = M - std::max<std::size_t>(1, M / 10);
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double m = w[i] * u.values[i] * u.values[i];
    total += m;
    if (i >= first_tail) tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

inline void check_tail(const RadialProfile& u, const char* where) {
  const double f = tail_mass_fraction(u);
  if (f > 1e-8) throw TruncationError(std::string(where) + ": profile not resolved inside the grid", f);
}

} // namespace detail

/// Unitary radial Fourier transform û(ω) = ∫_0^∞ u_0(r) J_ν(ωr)(ωr)^{-ν} r^{n-1} dr.
/// Throws TruncationError when the outermost tenth of the grid carries more than 1e-8 of the L² mass.
inline RadialProfile hankel_transform(const RadialProfile& u, const RadialGrid& omega_grid) {
  detail::check_tail(u, "hankel_transform");
  const auto K = detail::HankelCache::instance().get(u.grid, omega_grid, u.n);
  const std::size_t M = u.size(), P = omega_grid.size();
  std::vector<double> out(P, 0.0);
  for (std::size_t j = 0; j < P; ++j) {
    const double* row = K->data() + j * M;
    double acc = 0.0;
    for (std::size_t i = 0; i < M; ++i) acc += row[i] * u.values[i];
    out[j] = acc;
  }
  return RadialProfile(omega_grid, std::move(out), u.n);
}

inline RadialProfile hankel_transform(const RadialProfile& u) { return hankel_transform(u, default_frequency_grid()); }

/// Inverse transform; the radial transform is its own inverse.
inline RadialProfile hankel_inverse(const RadialProfile& uhat, const RadialGrid& r_grid) {
  return hankel_transform(uhat, r_grid);
}

// ---------------------------------------------------------------------------
// Norms

/// [u]_{H^s} = (|S^{n-1}| ∫ ω^{2s} |û(ω)|² ω^{n-1} dω)^{1/2}.
inline double gagliardo_radial(const RadialProfile& u, double s, const RadialGrid& omega_grid) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("gagliardo_radial: s must lie in [0, 1)");
  const auto uh = hankel_transform(u, omega_grid);
  detail::check_tail(uh, "gagliardo_radial");
  std::vector<double> sq(uh.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = uh.values[i] * uh.values[i];
  return std::sqrt(sphere_area(u.n) * omega_grid.integrate(sq, 2.0 * s + u.n - 1.0));
}

inline double gagliardo_radial(const RadialProfile& u, double s) {
  return gagliardo_radial(u, s, default_frequency_grid());
}

/// ‖u‖_{L^q_a} = (|S^{n-1}| ∫ |u_0(r)|^q r^{a+n-1} dr)^{1/q}.
inline double weighted_norm_radial(const RadialProfile& u, double q, double a) {
  if (!(a > -u.n)) throw DomainError("weighted_norm_radial: need a > -n");
  if (!(q > 0.0)) throw DomainError("weighted_norm_radial: need q > 0");
  std::vector<double> g(u.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(u.values[i]), q);
  return std::pow(sphere_area(u.n) * u.grid.integrate(g, a + u.n - 1.0), 1.0 / q);
}

/// ‖u‖_{H^s_{q,a}} = ([u]² + ‖u‖²_{L^q_a})^{1/2}.
inline double energy_norm_radial(const RadialProfile& u, const ProblemParams& prm, const RadialGrid& omega_grid) {
  const double g = gagliardo_radial(u, prm.s, omega_grid);
  const double w = weighted_norm_radial(u, prm.q, prm.a);
  return std::sqrt(g * g + w * w);
}

// ---------------------------------------------------------------------------
// Frequency split

/// Smooth transition, 1 on (-∞, 1/2], 0 on [1, ∞), built from exp(-1/x) glue.
inline double cutoff_psi(double x) {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  const double y = 2.0 * (1.0 - x);  // 1 at x = 1/2, 0 at x = 1
  const double f = std::exp(-1.0 / y), g = std::exp(-1.0 / (1.0 - y));
  return f / (f + g);
}

inline constexpr const char* kCutoffPsiId = "exp-glue[1/2,1]";

struct FrequencySplit {
  RadialProfile low;
  RadialProfile high;
  double t = 0;
  std::string multiplier_id;
};

/// low = inverse transform of û(ω) ψ(tω), high = u - low on the grid of u.
inline FrequencySplit frequency_split(const RadialProfile& u, double t, const RadialGrid& omega_grid) {
  if (!(t > 0.0)) throw DomainError("frequency_split: t must be positive");
  auto uh = hankel_transform(u, omega_grid);
  for (std::size_t j = 0; j < uh.size(); ++j) uh.values[j] *= cutoff_psi(t * omega_grid[j]);
  FrequencySplit out;
  out.t = t;
  out.multiplier_id = kCutoffPsiId;
  out.low = hankel_inverse(uh, u.grid);
  out.high = u;
  for (std::size_t i = 0; i < u.size(); ++i) out.high.values[i] = u.values[i] - out.low.values[i];
  return out;
}

inline FrequencySplit frequency_split(const RadialProfile& u, double t) {
  return frequency_split(u, t, default_frequency_grid());
}

// ---------------------------------------------------------------------------
// Empirical inequality constants

namespace detail {

/// Maximum of f over indices [from, size) with a parabolic correction at interior maxima.
inline double refined_max(const std::vector<double>& f, std::size_t from) {
  if (from >= f.size()) throw DomainError("refined_max: empty range");
  std::size_t k = from;
  for (std::size_t i = from; i < f.size(); ++i)
    if (f[i] > f[k]) k = i;
  if (k == from || k + 1 >= f.size()) return f[k];
  const double fm = f[k - 1], f0 = f[k], fp = f[k + 1];
  const double curv = 2.0 * f0 - fm - fp;
  if (!(curv > 0.0)) return f0;
  return f0 + (fp - fm) * (fp - fm) / (8.0 * curv);
}

} // namespace detail

/// sup_{r >= r_min} r^σ |u_0(r)| / ([u]^θ ‖u‖_{L^q_a}^{1-θ}); r_min is the grid point with index `r_min_index`.
inline double strauss_ratio(const RadialProfile& u, const ProblemParams& prm, const RadialGrid& omega_grid,
                            std::size_t r_min_index = 4) {
  if (!(prm.s > 0.5)) throw DomainError("strauss_ratio: requires s > 1/2");
  const auto ex = exponents(prm);
  const double semi = gagliardo_radial(u, prm.s, omega_grid);
  const double wn = weighted_norm_radial(u, prm.q, prm.a);
  const double denom = std::pow(semi, ex.theta) * std::pow(wn, 1.0 - ex.theta);
  if (!(denom > 0.0)) throw DomainError("strauss_ratio: zero profile");
  std::vector<double> f(u.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(u.grid[i], ex.sigma) * std::abs(u.values[i]);
  return detail::refined_max(f, r_min_index) / denom;
}

inline double strauss_ratio(const RadialProfile& u, const ProblemParams& prm) {
  return strauss_ratio(u, prm, default_frequency_grid());
}

/// max over grid pairs in [eps, r_max] of |u(r1) - u(r2)| / |r1 - r2|^α, divided by ‖u‖_{H^s_{q,a}}.
inline double holder_ratio(const RadialProfile& u, const ProblemParams& prm, double eps, const RadialGrid& omega_grid) {
  if (!(eps > 0.0)) throw DomainError("holder_ratio: eps must be positive");
  const auto ex = exponents(prm);
  const auto& r = u.radii();
  const auto first = static_cast<std::size_t>(std::lower_bound(r.begin(), r.end(), eps) - r.begin());
  if (r.size() - first < 2) throw DomainError("holder_ratio: fewer than two grid points in [eps, r_max]");
  double best = 0.0;
  for (std::size_t i = first; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      const double d = std::abs(u.values[i] - u.values[j]);
      if (d == 0.0) continue;
      best = std::max(best, d / std::pow(r[j] - r[i], ex.alpha));
    }
  if (best == 0.0) return 0.0;
  const double norm = energy_norm_radial(u, prm, omega_grid);
  if (!(norm > 0.0)) throw DomainError("holder_ratio: zero profile");
  return best / norm;
}

inline double holder_ratio(const RadialProfile& u, const ProblemParams& prm, double eps) {
  return holder_ratio(u, prm, eps, default_frequency_grid());
}

// ---------------------------------------------------------------------------
// Two-column CSV (r,value)

inline void write_profile_csv(std::ostream& os, const RadialProfile& u) {
  os << "r,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < u.size(); ++i) os << u.grid[i] << ',' << u.values[i] << '\n';
}

/// Reads the two-column format; the grid is rebuilt with trapezoid weights.
inline RadialProfile read_profile_csv(std::istream& is, int n) {
  std::string line;
  std::vector<double> r, v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("read_profile_csv: expected two columns");
    // strtod rather than stod: Gaussian tails produce subnormals, which stod rejects.
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    char *ea = nullptr, *eb = nullptr;
    const double x = std::strtod(a.c_str(), &ea), y = std::strtod(b.c_str(), &eb);
    const bool ok = ea != a.c_str() && *ea == '\0' && eb != b.c_str() && (*eb == '\0' || *eb == '\r');
    if (!ok) {
      if (r.empty()) continue;  // header
      throw DomainError("read_profile_csv: unparsable line: " + line);
    }
    r.push_back(x);
    v.push_back(y);
  }
  return RadialProfile(RadialGrid::from_points(std::move(r)), std::move(v), n);
}

} // namespace fraclab
