#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "fraclab/energy_grid.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"
#include "fraclab/profiles.hpp"
#include "fraclab/radial_spectral.hpp"

namespace fraclab {

enum class Direction { gradient, conjugate };

struct SolveOptions {
  int max_iters = 20000;
  double grad_tol = 1e-6;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  std::uint64_t seed = 20240601;
  Direction direction = Direction::conjugate;
  unsigned threads = 1;
  bool record_trace = false;

  void check() const {
    if (max_iters <= 0) throw DomainError("SolveOptions: max_iters must be positive");
    if (!(grad_tol > 0.0)) throw DomainError("SolveOptions: grad_tol must be positive");
    if (!(step0 > 0.0)) throw DomainError("SolveOptions: step0 must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw DomainError("SolveOptions: armijo_c must lie in (0, 1)");
    if (threads == 0) throw DomainError("SolveOptions: threads must be positive");
  }
};

struct TraceRow {
  int iter = 0;
  double level = 0;
  double residual = 0;
  double step = 0;
};

template <class Point>
struct MinimizationResult {
  Point minimizer;
  double level = 0;
  double multiplier = 0;
  double constraint_residual = 0;
  double nonradiality = 0;
  double residual = 0;  ///< final relative projected gradient norm
  int iters = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<TraceRow> trace;
  // Multi-start bookkeeping (solve_M); single-start runs leave start_index at 0.
  int start_index = 0;
  std::vector<std::string> start_names;
  std::vector<double> start_levels;
  std::vector<bool> start_converged;
  // Whole-space runs: profile not decayed at the truncation radius.
  bool truncation_suspect = false;
  double tail_ratio = 0;
};

/// Constrained problem  min E(u) / G(u)^{2/p}  with E = Q + L, Q a quadratic form, G p-homogeneous.
/// Gradients are Riesz representers with respect to `inner`.
template <class P>
concept QuotientProblem = requires(const P& p, const std::vector<double>& u, const std::vector<double>& v) {
  { p.p() } -> std::convertible_to<double>;
  { p.inner(u, v) } -> std::convertible_to<double>;
  { p.quadratic(u) } -> std::convertible_to<double>;
  { p.quadratic_gradient(u) } -> std::convertible_to<std::vector<double>>;
  { p.lower_order(u) } -> std::convertible_to<double>;
  { p.lower_order_change(u, v) } -> std::convertible_to<double>;
  { p.lower_order_gradient(u) } -> std::convertible_to<std::vector<double>>;
  { p.constraint(u) } -> std::convertible_to<double>;
  { p.constraint_change(u, v) } -> std::convertible_to<double>;
  { p.constraint_gradient(u) } -> std::convertible_to<std::vector<double>>;
  { p.precondition(u) } -> std::convertible_to<std::vector<double>>;
  { p.project(u) } -> std::convertible_to<std::vector<double>>;
  { p.project_direction(u) } -> std::convertible_to<std::vector<double>>;
};

namespace detail {

inline void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

} // namespace detail

/// Projected, preconditioned descent on the constraint manifold G = 1.
///
/// Each iteration: Riesz gradients of E and G; preconditioned tangent direction (PR+ conjugate
/// by default); trial point u ← P(u - τd) / G(P(u - τd))^{1/p} where P is the positive-part
/// (and, for radial problems, angular-average) projection; Armijo backtracking on the exact
/// quotient change. Converged when the relative preconditioned projected gradient is below
/// grad_tol.
template <QuotientProblem Problem>
MinimizationResult<std::vector<double>> minimize(const Problem& prob, const std::vector<double>& u0, const SolveOptions& opts) {
  opts.check();
  const double p = prob.p();
  MinimizationResult<std::vector<double>> res;

  auto normalize = [&](std::vector<double> v) {
    const double g = prob.constraint(v);
    if (!(g > 0.0)) return std::vector<double>{};
    const double c = std::pow(g, -1.0 / p);
    for (double& x : v) x *= c;
    return v;
  };

  std::vector<double> u = normalize(prob.project(u0));
  if (u.empty()) throw DomainError("minimize: initial point has G(u0) <= 0 after projection");

  double E = prob.quadratic(u) + prob.lower_order(u);
  double G = prob.constraint(u);
  double Q = E * std::pow(G, -2.0 / p);
  double tau = opts.step0;

  std::vector<double> d_prev, z_prev;
  double rz_prev = 0.0;
  std::vector<double> gE, gG, gQ;
  res.stop_reason = "max_iters";
  int it = 0;
  for (;; ++it) {
    gQ = prob.quadratic_gradient(u);
    gE = gQ;
    detail::axpy(gE, 1.0, prob.lower_order_gradient(u));
    gE = prob.project_direction(gE);
    gG = prob.project_direction(prob.constraint_gradient(u));
    const auto Pg = prob.project_direction(prob.precondition(gE));
    const auto PG = prob.project_direction(prob.precondition(gG));
    const double PGgG = prob.inner(PG, gG);
    const double mu = prob.inner(Pg, gG) / PGgG;
    std::vector<double> z = Pg, r = gE;
    detail::axpy(z, -mu, PG);
    detail::axpy(r, -mu, gG);
    const double rz = prob.inner(r, z);
    const double gPg = prob.inner(gE, Pg);
    res.residual = gPg > 0.0 ? std::sqrt(std::max(rz, 0.0) / gPg) : 0.0;
    if (opts.record_trace) res.trace.push_back({it, Q, res.residual, tau});
    if (res.residual < opts.grad_tol) {
      res.converged = true;
      res.stop_reason = "converged";
      break;
    }
    if (it >= opts.max_iters) break;

    std::vector<double> d = z;
    if (opts.direction == Direction::conjugate && !d_prev.empty()) {
      const double beta = std::max(0.0, (rz - prob.inner(r, z_prev)) / rz_prev);
      detail::axpy(d, beta, d_prev);
      detail::axpy(d, -prob.inner(d, gG) / PGgG, PG);
      if (!(prob.inner(gE, d) > 0.0)) d = z;
    }

    // Backtracking with the quotient change evaluated from differences:
    // E(u+δ) - E(u) = <∇Q(u), δ> + Q(δ) + ΔL,  ΔG summed termwise.
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const double dec = prob.inner(gE, d);
      while (tau > 1e-14 * opts.step0) {
        std::vector<double> trial = u;
        detail::axpy(trial, -tau, d);
        trial = normalize(prob.project(trial));
        if (!trial.empty()) {
          std::vector<double> delta = trial;
          detail::axpy(delta, -1.0, u);
          const double dE = prob.inner(gQ, delta) + prob.quadratic(delta) + prob.lower_order_change(u, trial);
          const double x = prob.constraint_change(u, trial) / G;
          const double factor_m1 = std::expm1(-2.0 / p * std::log1p(x));
          const double dQ = std::pow(G, -2.0 / p) * (dE * (1.0 + factor_m1) + E * factor_m1);
          if (dQ <= -opts.armijo_c * tau * dec) {
            u = std::move(trial);
            E += dE;
            G = prob.constraint(u);
            Q += dQ;
            accepted = true;
            break;
          }
        }
        tau *= 0.5;
      }
      if (!accepted) {
        // Conjugate direction failed; retry once along the plain projected gradient.
        if (d == z) break;
        d = z;
        tau = opts.step0;
      }
    }
    if (!accepted) {
      res.stop_reason = "line_search";
      break;
    }
    d_prev = std::move(d);
    z_prev = std::move(z);
    rz_prev = rz;
    tau = std::min(2.0 * tau, 1e6 * opts.step0);
  }

  res.iters = it;
  E = prob.quadratic(u) + prob.lower_order(u);
  G = prob.constraint(u);
  res.level = E * std::pow(G, -2.0 / p);
  res.constraint_residual = std::abs(G - 1.0);
  res.multiplier = 0.5 * p * prob.inner(gE, gG) / prob.inner(gG, gG);
  res.minimizer = std::move(u);
  return res;
}

// ---------------------------------------------------------------------------
// Ball problem on a grid

class GridQuotientProblem {
public:
  GridQuotientProblem(const GridEnergy& energy, bool radial) : e_(energy), radial_(radial) {}

  double p() const { return e_.params().p; }
  double inner(const std::vector<double>& a, const std::vector<double>& b) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  }
  double quadratic(const std::vector<double>& u) const { return e_.op().gagliardo_sq(u); }
  std::vector<double> quadratic_gradient(const std::vector<double>& u) const { return e_.op().gagliardo_gradient(u); }
  double lower_order(const std::vector<double>& u) const { return e_.lower_order(u); }
  double lower_order_change(const std::vector<double>& u, const std::vector<double>& v) const { return e_.lower_order_change(u, v); }
  std::vector<double> lower_order_gradient(const std::vector<double>& u) const { return e_.lower_order_gradient(u); }
  double constraint(const std::vector<double>& u) const { return e_.constraint(u); }
  double constraint_change(const std::vector<double>& u, const std::vector<double>& v) const { return e_.constraint_change(u, v); }
  std::vector<double> constraint_gradient(const std::vector<double>& u) const { return e_.constraint_gradient(u); }
  std::vector<double> precondition(const std::vector<double>& v) const { return e_.op().precondition(v); }

  std::vector<double> project(std::vector<double> u) const {
    const auto& m = e_.op().mask();
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = m[k] ? std::max(u[k], 0.0) : 0.0;
    return radial_ ? e_.op().radial_average(u) : u;
  }
  std::vector<double> project_direction(std::vector<double> v) const {
    const auto& m = e_.op().mask();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!m[k]) v[k] = 0.0;
    return radial_ ? e_.op().radial_average(v) : v;
  }

private:
  const GridEnergy& e_;
  bool radial_;
};

/// ν(u) = ‖u - Πu‖₂ / ‖u‖₂ with Π the angular average.
inline double nonradiality_index(const GridFunction& u) {
  const double n = u.l2_norm();
  if (!(n > 0.0)) throw DomainError("nonradiality_index: zero function");
  const auto avg = RadialClasses(u.spec()).average(u.values());
  double acc = 0.0;
  for (std::size_t k = 0; k < avg.size(); ++k) acc += (u.values()[k] - avg[k]) * (u.values()[k] - avg[k]);
  return std::sqrt(acc) * u.spec().h / n;
}

namespace detail {

inline MinimizationResult<GridFunction> wrap_grid(const GridSpec& spec, MinimizationResult<std::vector<double>>&& r) {
  MinimizationResult<GridFunction> out;
  out.minimizer = GridFunction(spec, std::move(r.minimizer));
  out.level = r.level;
  out.multiplier = r.multiplier;
  out.constraint_residual = r.constraint_residual;
  out.residual = r.residual;
  out.iters = r.iters;
  out.converged = r.converged;
  out.stop_reason = std::move(r.stop_reason);
  out.trace = std::move(r.trace);
  out.nonradiality = nonradiality_index(out.minimizer);
  return out;
}

/// Runs fn(0..count-1) on up to `threads` workers; results are stored by index.
template <class R>
std::vector<R> parallel_indexed(std::size_t count, unsigned threads, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::size_t next = 0;
  std::mutex m;
  std::vector<std::thread> pool;
  std::exception_ptr error;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(m);
          if (next >= count || error) return;
          i = next++;
        }
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

} // namespace detail

inline MinimizationResult<GridFunction> minimize_grid(const GridEnergy& energy, const GridFunction& u0, bool radial,
                                                      const SolveOptions& opts) {
  GridQuotientProblem prob(energy, radial);
  return detail::wrap_grid(energy.spec(), minimize(prob, u0.values(), opts));
}

/// Centred Gaussian start with σ = R/4.
inline GridFunction start_centered(const GridSpec& spec) {
  const double sig = spec.R / 4.0;
  return GridFunction::sample(spec, [&](double x, double y) {
    const double dx = x - spec.cx, dy = y - spec.cy;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * sig * sig));
  });
}

/// Bump centred at 0.6 R along +x, width min(0.5, 0.2 R).
inline GridFunction start_off_center(const GridSpec& spec) {
  const double w = std::min(0.5, 0.2 * spec.R);
  const double x0 = spec.cx + 0.6 * spec.R;
  return GridFunction::sample(spec, [&](double x, double y) {
    const double dx = x - x0, dy = y - spec.cy;
    return std::exp(-(dx * dx + dy * dy) / (w * w));
  });
}

/// Uniform [0, 1) values from mt19937_64(seed).
inline GridFunction start_random(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(spec.size());
  for (double& x : v) x = profiles::uniform01(rng);
  return GridFunction(spec, std::move(v));
}

/// m(R): minimization over radial functions on the ball.
inline MinimizationResult<GridFunction> solve_m(const ProblemParams& prm, const GridSpec& spec, const SolveOptions& opts) {
  GridEnergy energy(spec, prm);
  auto r = minimize_grid(energy, start_centered(spec), true, opts);
  r.start_names = {"centered"};
  r.start_levels = {r.level};
  r.start_converged = {r.converged};
  return r;
}

/// M(R): multi-start minimization over all functions on the ball.
///
/// Starts: 0 centred Gaussian, 1 off-centre bump, 2 random field (seed + 2), 3 the radial
/// minimizer (computed here when not supplied), 4 an optional warm start. The lowest level
/// among converged runs wins; levels within 1e-10 go to the lower start index.
inline MinimizationResult<GridFunction> solve_M(const ProblemParams& prm, const GridSpec& spec, const SolveOptions& opts,
                                                const GridFunction* radial_minimizer = nullptr,
                                                const GridFunction* warm_start = nullptr) {
  GridEnergy energy(spec, prm);
  GridFunction radial;
  if (radial_minimizer) {
    if (!(radial_minimizer->spec() == spec)) throw DomainError("solve_M: radial minimizer lives on a different grid");
    radial = *radial_minimizer;
  } else {
    radial = solve_m(prm, spec, opts).minimizer;
  }

  std::vector<std::string> names = {"centered", "off_center", "random", "radial_minimizer"};
  std::vector<GridFunction> starts = {start_centered(spec), start_off_center(spec), start_random(spec, opts.seed + 2), radial};
  if (warm_start) {
    if (!(warm_start->spec() == spec)) throw DomainError("solve_M: warm start lives on a different grid");
    names.push_back("warm_start");
    starts.push_back(*warm_start);
  }

  auto runs = detail::parallel_indexed<MinimizationResult<GridFunction>>(
      starts.size(), opts.threads, [&](std::size_t i) { return minimize_grid(energy, starts[i], false, opts); });

  bool any_converged = false;
  for (const auto& r : runs) any_converged = any_converged || r.converged;
  std::size_t best = runs.size();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (any_converged && !runs[i].converged) continue;
    if (best == runs.size() || runs[i].level < runs[best].level - 1e-10) best = i;
  }
  MinimizationResult<GridFunction> out = std::move(runs[best]);
  out.start_index = static_cast<int>(best);
  out.start_names = names;
  for (const auto& r : runs) {
    out.start_levels.push_back(r.level);
    out.start_converged.push_back(r.converged);
  }
  if (best < out.start_levels.size()) out.start_levels[best] = out.level;
  return out;
}

// ---------------------------------------------------------------------------
// Radial problem on the whole space, truncated at r = L with u(L) = 0

struct RadialSolveSpec {
  double L = 32.0;
  double r_min = 1e-3;
  double dr = 0.038;        ///< far-field spacing of the radius grid
  double omega_max = 90.0;  ///< must exceed π / dr

  RadialGrid radius_grid() const {
    const auto count = static_cast<std::size_t>(std::ceil((L - std::log(std::expm1(r_min))) / dr)) + 1;
    return RadialGrid::softplus(r_min, L, count);
  }
  /// Far-field frequency spacing below π / L.
  RadialGrid frequency_grid() const {
    const double dw = 0.8 * std::numbers::pi / L;
    const auto count = static_cast<std::size_t>(std::ceil((omega_max - std::log(std::expm1(r_min))) / dw)) + 1;
    return RadialGrid::softplus(r_min, omega_max, count);
  }
};

class RadialQuotientProblem {
public:
  RadialQuotientProblem(const ProblemParams& prm, const RadialSolveSpec& spec)
      : prm_(prm), rg_(spec.radius_grid()), wg_(spec.frequency_grid()) {
    prm.check_domain();
    const double S = sphere_area(prm.n);
    wm_ = rg_.moment_weights(prm.n - 1.0);
    wa_ = rg_.moment_weights(prm.n - 1.0 + prm.a);
    wb_ = rg_.moment_weights(prm.n - 1.0 + prm.b);
    for (auto* w : {&wm_, &wa_, &wb_})
      for (double& x : *w) x *= S;
    ww_ = wg_.moment_weights(prm.n - 1.0);
    for (std::size_t j = 0; j < wg_.size(); ++j) {
      sym_.push_back(std::pow(wg_[j], 2.0 * prm.s));
      ww_[j] *= S;
    }
    fwd_ = detail::HankelCache::instance().get(rg_, wg_, prm.n);
    bwd_ = detail::HankelCache::instance().get(wg_, rg_, prm.n);
  }

  const RadialGrid& grid() const { return rg_; }
  const RadialGrid& frequency_grid() const { return wg_; }

  double p() const { return prm_.p; }
  double inner(const std::vector<double>& a, const std::vector<double>& b) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += wm_[i] * a[i] * b[i];
    return acc;
  }

  std::vector<double> forward(const std::vector<double>& u) const { return apply(*fwd_, u, wg_.size()); }
  std::vector<double> backward(const std::vector<double>& v) const { return apply(*bwd_, v, rg_.size()); }

  double quadratic(const std::vector<double>& u) const {
    const auto uh = forward(u);
    double acc = 0.0;
    for (std::size_t j = 0; j < uh.size(); ++j) acc += ww_[j] * sym_[j] * uh[j] * uh[j];
    return acc;
  }
  std::vector<double> quadratic_gradient(const std::vector<double>& u) const {
    auto uh = forward(u);
    for (std::size_t j = 0; j < uh.size(); ++j) uh[j] *= 2.0 * sym_[j];
    return backward(uh);
  }
  double lower_order(const std::vector<double>& u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += wa_[i] * std::pow(std::abs(u[i]), prm_.q);
    return acc;
  }
  double lower_order_change(const std::vector<double>& u, const std::vector<double>& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != v[i]) acc += wa_[i] * (std::pow(std::abs(v[i]), prm_.q) - std::pow(std::abs(u[i]), prm_.q));
    return acc;
  }
  std::vector<double> lower_order_gradient(const std::vector<double>& u) const {
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != 0.0)
        g[i] = prm_.q * wa_[i] / wm_[i] * std::pow(std::abs(u[i]), prm_.q - 1.0) * (u[i] > 0 ? 1.0 : -1.0);
    return g;
  }
  double constraint(const std::vector<double>& u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] > 0.0) acc += wb_[i] * std::pow(u[i], prm_.p);
    return acc;
  }
  double constraint_change(const std::vector<double>& u, const std::vector<double>& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double a = std::max(u[i], 0.0), b = std::max(v[i], 0.0);
      if (a != b) acc += wb_[i] * (std::pow(b, prm_.p) - std::pow(a, prm_.p));
    }
    return acc;
  }
  std::vector<double> constraint_gradient(const std::vector<double>& u) const {
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] > 0.0) g[i] = prm_.p * wb_[i] / wm_[i] * std::pow(u[i], prm_.p - 1.0);
    return g;
  }
  /// Inverse of the symbol 2(ω^{2s} + 1) applied through the transform pair.
  std::vector<double> precondition(const std::vector<double>& v) const {
    auto vh = forward(v);
    for (std::size_t j = 0; j < vh.size(); ++j) vh[j] /= 2.0 * (sym_[j] + 1.0);
    return project_direction(backward(vh));
  }
  std::vector<double> project(std::vector<double> u) const {
    for (double& x : u) x = std::max(x, 0.0);
    u.back() = 0.0;
    return u;
  }
  std::vector<double> project_direction(std::vector<double> v) const {
    v.back() = 0.0;
    return v;
  }

private:
  static std::vector<double> apply(const std::vector<double>& K, const std::vector<double>& x, std::size_t rows) {
    const std::size_t cols = x.size();
    std::vector<double> y(rows, 0.0);
    for (std::size_t j = 0; j < rows; ++j) {
      const double* row = K.data() + j * cols;
      double acc = 0.0;
      for (std::size_t i = 0; i < cols; ++i) acc += row[i] * x[i];
      y[j] = acc;
    }
    return y;
  }

  ProblemParams prm_;
  RadialGrid rg_, wg_;
  std::vector<double> wm_, wa_, wb_, ww_, sym_;
  std::shared_ptr<const std::vector<double>> fwd_, bwd_;
};

/// Largest |u| over the outer tenth [0.9 L, L] relative to the peak.
inline double outer_tail_ratio(const RadialProfile& u) {
  double peak = 0.0, tail = 0.0;
  const double L = u.grid.r_max();
  for (std::size_t i = 0; i < u.size(); ++i) {
    peak = std::max(peak, std::abs(u.values[i]));
    if (u.grid[i] >= 0.9 * L) tail = std::max(tail, std::abs(u.values[i]));
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

/// m(∞): radial minimization on R^n truncated at L, seminorm through the radial transform.
/// The result is flagged truncation-suspect when the outer tail exceeds `tail_tol` of the peak.
inline MinimizationResult<RadialProfile> solve_m_infty(const ProblemParams& prm, const RadialSolveSpec& spec,
                                                       const SolveOptions& opts, double tail_tol = 1e-3) {
  RadialQuotientProblem prob(prm, spec);
  const auto& g = prob.grid();
  std::vector<double> u0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u0[i] = std::exp(-0.5 * g[i] * g[i]);
  auto r = minimize(prob, u0, opts);
  MinimizationResult<RadialProfile> out;
  out.minimizer = RadialProfile(g, std::move(r.minimizer), prm.n);
  out.level = r.level;
  out.multiplier = r.multiplier;
  out.constraint_residual = r.constraint_residual;
  out.residual = r.residual;
  out.iters = r.iters;
  out.converged = r.converged;
  out.stop_reason = std::move(r.stop_reason);
  out.trace = std::move(r.trace);
  out.nonradiality = 0.0;
  out.tail_ratio = outer_tail_ratio(out.minimizer);
  out.truncation_suspect = out.tail_ratio > tail_tol;
  return out;
}

} // namespace fraclab
