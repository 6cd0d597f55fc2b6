#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fraclab/errors.hpp"
#include "fraclab/fft.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

/// κ(x) = ∫_{|y|>R} |x - y|^{-(n+2s)} dy for |x| < R, reduced to one angular integral:
/// κ = |S^{n-2}|/(2s) ∫_0^π ρ(φ)^{-2s} sin^{n-2}φ dφ with ρ(φ) the distance from x to the sphere along φ.
inline double exterior_kernel(double radius, double R, int n, double s) {
  if (n < 2) throw DomainError("exterior_kernel: n must be >= 2");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("exterior_kernel: s must lie in (0, 1)");
  if (!(radius >= 0.0 && radius < R)) throw DomainError("exterior_kernel: requires |x| < R");
  if (radius == 0.0) return sphere_area(n) * std::pow(R, -2.0 * s) / (2.0 * s);
  auto f = [=](double phi) {
    const double c = std::cos(phi), sn = std::sin(phi);
    const double rho = -radius * c + std::sqrt(R * R - radius * radius * sn * sn);
    return std::pow(rho, -2.0 * s) * (n == 2 ? 1.0 : std::pow(sn, n - 2));
  };
  using boost::math::quadrature::gauss_kronrod;
  // The integrand peaks at φ = 0 with width ~ sqrt((R - |x|)/R); split there.
  const double split = std::min(std::numbers::pi / 2, 4.0 * std::sqrt((R - radius) / R));
  const double v = gauss_kronrod<double, 61>::integrate(f, 0.0, split, 20, 1e-12) +
                   gauss_kronrod<double, 61>::integrate(f, split, std::numbers::pi, 20, 1e-12);
  return sphere_area(n - 1) / (2.0 * s) * v;
}

enum class GagliardoMode { direct, convolution, checked };

struct EnergyBreakdown {
  double interior = 0;  ///< pairs inside the ball, self-cell correction included
  double exterior = 0;  ///< Σ u_i² κ(x_i) h², times C(n,s)
};

struct EnergyReport {
  double gagliardo_sq = 0;
  double lower_order = 0;
  double constraint = 0;
  double energy = 0;
  EnergyBreakdown breakdown;
};

/// |x|^w at every masked node, zero elsewhere; cells touching the origin use the mean of
/// |x|^w over 5×5 sub-cell midpoints.
inline std::vector<double> weight_field(const GridSpec& sp, double w) {
  if (!(w > -2.0)) throw DomainError("weight_field: need w > -n");
  const auto mask = sp.mask();
  std::vector<double> out(sp.size(), 0.0);
  const double hh = 0.5 * sp.h;
  for (std::size_t i = 0; i < sp.N; ++i)
    for (std::size_t j = 0; j < sp.N; ++j) {
      if (!mask[i * sp.N + j]) continue;
      const double x = sp.x(i), y = sp.y(j);
      if (w == 0.0) {
        out[i * sp.N + j] = 1.0;
      } else if (std::abs(x) <= hh && std::abs(y) <= hh) {
        double acc = 0.0;
        for (int a = 0; a < 5; ++a)
          for (int b = 0; b < 5; ++b) {
            const double px = x - hh + (a + 0.5) * sp.h / 5.0;
            const double py = y - hh + (b + 0.5) * sp.h / 5.0;
            acc += std::pow(std::hypot(px, py), w);
          }
        out[i * sp.N + j] = acc / 25.0;
      } else {
        out[i * sp.N + j] = std::pow(std::hypot(x, y), w);
      }
    }
  return out;
}

/// Partition of the masked nodes into classes of equal distance to the centre.
class RadialClasses {
public:
  RadialClasses() = default;

  explicit RadialClasses(const GridSpec& spec) {
    const auto mask = spec.mask();
    const std::size_t N = spec.N;
    class_of_.assign(spec.size(), -1);
    std::unordered_map<std::int64_t, int> ids;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        if (!mask[i * N + j]) continue;
        const auto key = spec.radius_key(i, j);
        auto [it, fresh] = ids.try_emplace(key, static_cast<int>(keys_.size()));
        if (fresh) keys_.push_back(key);
        class_of_[i * N + j] = it->second;
      }
    count_.assign(keys_.size(), 0);
    for (int c : class_of_)
      if (c >= 0) ++count_[static_cast<std::size_t>(c)];
  }

  std::size_t size() const { return keys_.size(); }
  const std::vector<std::int64_t>& keys() const { return keys_; }
  int class_of(std::size_t node) const { return class_of_[node]; }

  /// Mean over each class; zero outside the mask. Accumulated as deviations from the first
  /// member, so a constant class maps to itself bit for bit and the projection is idempotent.
  std::vector<double> average(const std::vector<double>& u) const {
    std::vector<double> first(keys_.size(), 0.0), dev(keys_.size(), 0.0);
    std::vector<char> seen(keys_.size(), 0);
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (class_of_[k] < 0) continue;
      const auto c = static_cast<std::size_t>(class_of_[k]);
      if (!seen[c]) {
        seen[c] = 1;
        first[c] = u[k];
      } else {
        dev[c] += u[k] - first[c];
      }
    }
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
      if (class_of_[k] >= 0) {
        const auto c = static_cast<std::size_t>(class_of_[k]);
        out[k] = first[c] + dev[c] / count_[c];
      }
    return out;
  }

private:
  std::vector<int> class_of_;
  std::vector<std::int64_t> keys_;
  std::vector<int> count_;
};

/// Discrete killed Gagliardo form on an n = 2 grid:
///   [u]² = C(2,s) [ ½ Σ_{i≠j} (u_i - u_j)² |x_i - x_j|^{-2-2s} h⁴ + Σ_i u_i² κ(x_i) h²
///                   + ½ Z_s h^{4-2s} Σ_i |∇_h u_i|² / 2 ],
/// where Z_s = -Σ'_{k ∈ Z²} |k|^{-2s} (analytically continued) is the lattice defect of the
/// near-diagonal integral ∫ |z|^{-2s}.
class GridOperator {
public:
  GridOperator(const GridSpec& spec, double s)
      : spec_(spec), s_(s), mask_(spec.mask()), classes_(spec), conv_(spec.N) {
    spec_.check();
    if (!(s > 0.0 && s < 1.0)) throw DomainError("GridOperator: s must lie in (0, 1)");
    C_ = normalization_constant(2, s);
    zeta_ = -epstein_zeta_square(s);
    const double h = spec_.h;
    self_coeff_ = C_ * zeta_ * std::pow(h, 4.0 - 2.0 * s) / 4.0;

    const std::size_t N = spec_.N;
    // Exterior kernel per radius class.
    std::vector<double> class_kappa(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c)
      class_kappa[c] = exterior_kernel(spec_.radius_from_key(classes_.keys()[c]), spec_.R, 2, s);
    kappa_.assign(spec_.size(), 0.0);
    for (std::size_t k = 0; k < spec_.size(); ++k)
      if (classes_.class_of(k) >= 0) kappa_[k] = class_kappa[static_cast<std::size_t>(classes_.class_of(k))];

    const double p = 2.0 + 2.0 * s;
    auto K = [h, p](long di, long dj) {
      if (di == 0 && dj == 0) return 0.0;
      return std::pow(h * std::hypot(static_cast<double>(di), static_cast<double>(dj)), -p);
    };
    khat_ = conv_.kernel_spectrum(K);
    std::vector<double> m(mask_.begin(), mask_.end());
    kmask_ = conv_.apply(khat_, m);

    const long L = static_cast<long>(2 * N - 1);
    koff_.resize(static_cast<std::size_t>(L * L));
    for (long a = 0; a < L; ++a)
      for (long b = 0; b < L; ++b) koff_[static_cast<std::size_t>(a * L + b)] = K(a - static_cast<long>(N) + 1, b - static_cast<long>(N) + 1);

    // Preconditioner: inverse of the translation-invariant part of the Hessian plus a shift.
    const double k0 = khat_[0].real();
    precond_.resize(khat_.size());
    for (std::size_t i = 0; i < khat_.size(); ++i) {
      const double sym = 2.0 * C_ * std::pow(h, 4) * (k0 - khat_[i].real());
      precond_[i] = {1.0 / (sym + 2.0 * h * h), 0.0};
    }
  }

  /// Shared instance per (grid, s); construction is the expensive part.
  static std::shared_ptr<const GridOperator> shared(const GridSpec& spec, double s) {
    using Key = std::tuple<std::size_t, double, double, double, double, double>;
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const GridOperator>> cache;
    const Key key{spec.N, spec.h, spec.R, spec.cx, spec.cy, s};
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    if (cache.size() >= 6) cache.erase(cache.begin());
    auto op = std::make_shared<const GridOperator>(spec, s);
    cache.emplace(key, op);
    return op;
  }

  const GridSpec& spec() const { return spec_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  double s() const { return s_; }
  double normalization() const { return C_; }
  double lattice_defect() const { return zeta_; }
  const std::vector<double>& kappa() const { return kappa_; }

  /// Σ_{i∈mask} u_i (K*u)_i and Σ u_i² (K*mask)_i based pair term ½ Σ_{i≠j} (u_i-u_j)² K_ij.
  double pair_sum_convolution(const std::vector<double>& u) const {
    const auto ku = conv_.apply(khat_, u);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (mask_[k]) acc += u[k] * (u[k] * kmask_[k] - ku[k]);
    return acc;
  }

  /// The same pair term summed over all pairs i < j explicitly.
  double pair_sum_direct(const std::vector<double>& u) const {
    const long N = static_cast<long>(spec_.N), L = 2 * N - 1;
    std::vector<std::pair<long, long>> nodes;
    for (long i = 0; i < N; ++i)
      for (long j = 0; j < N; ++j)
        if (mask_[static_cast<std::size_t>(i * N + j)]) nodes.emplace_back(i, j);
    double acc = 0.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      const auto [ia, ja] = nodes[a];
      const double ua = u[static_cast<std::size_t>(ia * N + ja)];
      double row = 0.0;
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        const auto [ib, jb] = nodes[b];
        const double d = ua - u[static_cast<std::size_t>(ib * N + jb)];
        row += d * d * koff_[static_cast<std::size_t>((ia - ib + N - 1) * L + (ja - jb + N - 1))];
      }
      acc += row;
    }
    return acc;
  }

  /// Σ_{i∈mask} |∇_h u_i|² with centred differences, u = 0 off the grid.
  double gradient_energy(const std::vector<double>& u) const {
    const std::size_t N = spec_.N;
    const double h2 = 2.0 * spec_.h;
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        if (!mask_[i * N + j]) continue;
        const double gx = (at(u, i + 1, j) - at(u, i - 1, j)) / h2;
        const double gy = (at(u, i, j + 1) - at(u, i, j - 1)) / h2;
        acc += gx * gx + gy * gy;
      }
    return acc;
  }

  EnergyBreakdown gagliardo_parts(const std::vector<double>& u, GagliardoMode mode) const {
    const double h = spec_.h;
    double pair = 0.0;
    switch (mode) {
      case GagliardoMode::direct: pair = pair_sum_direct(u); break;
      case GagliardoMode::convolution: pair = pair_sum_convolution(u); break;
      case GagliardoMode::checked: {
        const double a = pair_sum_direct(u), b = pair_sum_convolution(u);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0 && std::abs(a - b) > 1e-8 * scale)
          throw ConsistencyError("gagliardo_grid: direct and convolution pair sums disagree");
        pair = b;
        break;
      }
    }
    double ext = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (mask_[k]) ext += u[k] * u[k] * kappa_[k];
    EnergyBreakdown out;
    out.interior = C_ * pair * std::pow(h, 4) + self_coeff_ * gradient_energy(u);
    out.exterior = C_ * ext * h * h;
    return out;
  }

  double gagliardo_sq(const std::vector<double>& u, GagliardoMode mode = GagliardoMode::convolution) const {
    const auto b = gagliardo_parts(u, mode);
    return b.interior + b.exterior;
  }

  /// ∂[u]²/∂u_i (Euclidean gradient in the nodal values), zero outside the mask.
  std::vector<double> gagliardo_gradient(const std::vector<double>& u) const {
    const std::size_t N = spec_.N;
    const double h = spec_.h, h4 = std::pow(h, 4), h2 = 2.0 * h;
    const auto ku = conv_.apply(khat_, u);
    std::vector<double> gx(u.size(), 0.0), gy(u.size(), 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (mask_[i * N + j]) {
          gx[i * N + j] = (at(u, i + 1, j) - at(u, i - 1, j)) / h2;
          gy[i * N + j] = (at(u, i, j + 1) - at(u, i, j - 1)) / h2;
        }
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        const std::size_t k = i * N + j;
        if (!mask_[k]) continue;
        const double pair = 2.0 * C_ * h4 * (kmask_[k] * u[k] - ku[k]);
        const double ext = 2.0 * C_ * kappa_[k] * u[k] * h * h;
        const double div = (at(gx, i - 1, j) - at(gx, i + 1, j) + at(gy, i, j - 1) - at(gy, i, j + 1)) / h2;
        g[k] = pair + ext + 2.0 * self_coeff_ * div;
      }
    return g;
  }

  std::vector<double> precondition(const std::vector<double>& v) const {
    auto out = conv_.apply(precond_, v);
    for (std::size_t k = 0; k < out.size(); ++k)
      if (!mask_[k]) out[k] = 0.0;
    return out;
  }

  const RadialClasses& radial_classes() const { return classes_; }

  std::vector<double> radial_average(const std::vector<double>& u) const { return classes_.average(u); }

private:
  double at(const std::vector<double>& u, std::size_t i, std::size_t j) const {
    // size_t wrap-around of i - 1 at i = 0 lands far above N.
    if (i >= spec_.N || j >= spec_.N) return 0.0;
    return u[i * spec_.N + j];
  }

  GridSpec spec_;
  double s_;
  std::vector<std::uint8_t> mask_;
  RadialClasses classes_;
  PaddedConvolution conv_;
  double C_ = 0, zeta_ = 0, self_coeff_ = 0;
  std::vector<double> kappa_;
  std::vector<std::complex<double>> khat_;
  std::vector<double> kmask_;
  std::vector<double> koff_;
  std::vector<std::complex<double>> precond_;
};

// ---------------------------------------------------------------------------
// Free-function interface

inline double gagliardo_grid(const GridFunction& u, double s, GagliardoMode mode = GagliardoMode::convolution) {
  return GridOperator::shared(u.spec(), s)->gagliardo_sq(u.values(), mode);
}

/// h² Σ_i |x_i|^w g(u_i)^e with g = u⁺ or |u|.
inline double weighted_integral_grid(const GridFunction& u, double e, double w, bool positive_part) {
  if (!(w > -2.0)) throw DomainError("weighted_integral_grid: need w > -n");
  const auto wf = weight_field(u.spec(), w);
  double acc = 0.0;
  for (std::size_t k = 0; k < wf.size(); ++k) {
    const double v = positive_part ? std::max(u.values()[k], 0.0) : std::abs(u.values()[k]);
    if (v > 0.0) acc += wf[k] * std::pow(v, e);
  }
  return acc * u.spec().h * u.spec().h;
}

/// Energy functional and constraint on a fixed grid, with cached weights.
class GridEnergy {
public:
  GridEnergy(const GridSpec& spec, const ProblemParams& prm)
      : prm_(prm), op_(GridOperator::shared(spec, prm.s)), wa_(weight_field(spec, prm.a)), wb_(weight_field(spec, prm.b)) {
    if (prm.n != 2) throw DomainError("GridEnergy: the grid discretization is two-dimensional");
    prm.check_domain();
  }

  const GridOperator& op() const { return *op_; }
  const ProblemParams& params() const { return prm_; }
  const GridSpec& spec() const { return op_->spec(); }
  double h2() const { return spec().h * spec().h; }

  double lower_order(const std::vector<double>& u) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u[k] != 0.0) acc += wa_[k] * std::pow(std::abs(u[k]), prm_.q);
    return acc * h2();
  }

  /// lower_order(v) - lower_order(u) summed termwise.
  double lower_order_change(const std::vector<double>& u, const std::vector<double>& v) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u[k] != v[k]) acc += wa_[k] * (std::pow(std::abs(v[k]), prm_.q) - std::pow(std::abs(u[k]), prm_.q));
    return acc * h2();
  }

  std::vector<double> lower_order_gradient(const std::vector<double>& u) const {
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u[k] != 0.0) g[k] = prm_.q * wa_[k] * std::pow(std::abs(u[k]), prm_.q - 1.0) * (u[k] > 0 ? 1.0 : -1.0) * h2();
    return g;
  }

  double constraint(const std::vector<double>& u) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u[k] > 0.0) acc += wb_[k] * std::pow(u[k], prm_.p);
    return acc * h2();
  }

  double constraint_change(const std::vector<double>& u, const std::vector<double>& v) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double a = std::max(u[k], 0.0), b = std::max(v[k], 0.0);
      if (a != b) acc += wb_[k] * (std::pow(b, prm_.p) - std::pow(a, prm_.p));
    }
    return acc * h2();
  }

  std::vector<double> constraint_gradient(const std::vector<double>& u) const {
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u[k] > 0.0) g[k] = prm_.p * wb_[k] * std::pow(u[k], prm_.p - 1.0) * h2();
    return g;
  }

  EnergyReport report(const std::vector<double>& u, GagliardoMode mode = GagliardoMode::convolution) const {
    EnergyReport r;
    r.breakdown = op_->gagliardo_parts(u, mode);
    r.gagliardo_sq = r.breakdown.interior + r.breakdown.exterior;
    r.lower_order = lower_order(u);
    r.constraint = constraint(u);
    r.energy = r.gagliardo_sq + r.lower_order;
    return r;
  }

  std::vector<double> gradient(const std::vector<double>& u) const {
    auto g = op_->gagliardo_gradient(u);
    const auto gl = lower_order_gradient(u);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += gl[k];
    return g;
  }

private:
  ProblemParams prm_;
  std::shared_ptr<const GridOperator> op_;
  std::vector<double> wa_, wb_;
};

inline EnergyReport energy(const GridFunction& u, const ProblemParams& prm,
                           GagliardoMode mode = GagliardoMode::convolution) {
  return GridEnergy(u.spec(), prm).report(u.values(), mode);
}

inline GridFunction energy_gradient(const GridFunction& u, const ProblemParams& prm) {
  return GridFunction(u.spec(), GridEnergy(u.spec(), prm).gradient(u.values()));
}

/// Angular average over classes of nodes at equal distance from the centre.
inline GridFunction radial_average(const GridFunction& u) {
  return GridFunction(u.spec(), RadialClasses(u.spec()).average(u.values()));
}

} // namespace fraclab
