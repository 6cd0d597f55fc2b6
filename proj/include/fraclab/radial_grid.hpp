#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

/// One-dimensional radius grid with quadrature weights for ∫_0^{r_max} g(r) dr.
///
/// The default layout is the softplus map r(t) = log(1 + e^t) sampled uniformly in t:
/// geometric near the origin, uniform far out. The trapezoid rule in t is then spectrally
/// accurate for smooth integrands; the piece [0, r_0] is closed by an origin cap
/// g(r_0) r_0 / (k + 1) for integrands behaving like r^k. Because the integrand does not vanish
/// at t_0, the first Euler-Maclaurin end term is added there as well.
class RadialGrid {
public:
  RadialGrid() = default;

  static RadialGrid softplus(double r_min, double r_max, std::size_t count) {
    if (!(r_min > 0.0 && r_max > r_min)) throw DomainError("RadialGrid: need 0 < r_min < r_max");
    if (count < 3) throw DomainError("RadialGrid: need at least 3 points");
    auto inv = [](double r) { return r > 30.0 ? r + std::log1p(-std::exp(-r)) : std::log(std::expm1(r)); };
    const double t0 = inv(r_min), t1 = inv(r_max);
    const double dt = (t1 - t0) / static_cast<double>(count - 1);
    RadialGrid g;
    g.r_.resize(count);
    g.w_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = t0 + dt * static_cast<double>(i);
      g.r_[i] = t > 30.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
      g.w_[i] = dt / (1.0 + std::exp(-t));
    }
    g.r_.front() = r_min;
    g.r_.back() = r_max;
    g.w_.front() *= 0.5;
    g.w_.back() *= 0.5;
    g.edge_dt_ = dt;
    return g;
  }

  /// Arbitrary strictly increasing radii with composite trapezoid weights.
  static RadialGrid from_points(std::vector<double> radii) {
    if (radii.size() < 2) throw DomainError("RadialGrid: need at least 2 points");
    if (radii.front() < 0.0) throw DomainError("RadialGrid: radii must be nonnegative");
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (!(radii[i] > radii[i - 1])) throw DomainError("RadialGrid: radii must be strictly increasing");
    RadialGrid g;
    g.r_ = std::move(radii);
    g.w_.assign(g.r_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < g.r_.size(); ++i) {
      const double d = 0.5 * (g.r_[i + 1] - g.r_[i]);
      g.w_[i] += d;
      g.w_[i + 1] += d;
    }
    return g;
  }

  std::size_t size() const { return r_.size(); }
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& weights() const { return w_; }
  double operator[](std::size_t i) const { return r_[i]; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }

  /// Weights for ∫_0^{r_max} f(r) r^k dr acting on samples of f, origin cap included.
  std::vector<double> moment_weights(double k) const {
    if (!(k > -1.0)) throw DomainError("RadialGrid: moment order must exceed -1");
    std::vector<double> out(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) out[i] = w_[i] * std::pow(r_[i], k);
    out[0] += std::pow(r_[0], k + 1.0) / (k + 1.0);
    // Near t_0 the integrand grows like e^{(k+1)t}, so g'(t_0) = (k+1) g(t_0).
    if (edge_dt_ > 0.0) out[0] += edge_dt_ * w_[0] * (k + 1.0) * std::pow(r_[0], k) / 6.0;
    return out;
  }

  /// ∫_0^{r_max} f(r) r^k dr.
  double integrate(const std::vector<double>& f, double k) const {
    if (f.size() != r_.size()) throw DomainError("RadialGrid: sample count mismatch");
    const auto w = moment_weights(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
    return acc;
  }

  /// Hash of the exact bit patterns of radii and weights; used as a cache key.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h ^= bits;
      h *= 1099511628211ull;
    };
    for (double v : r_) mix(v);
    for (double v : w_) mix(v);
    mix(edge_dt_);
    return h ^ r_.size();
  }

  bool operator==(const RadialGrid& o) const { return r_ == o.r_ && w_ == o.w_ && edge_dt_ == o.edge_dt_; }

private:
  std::vector<double> r_;
  std::vector<double> w_;
  double edge_dt_ = 0.0; // softplus step; 0 for point-list grids
};

} // namespace fraclab
