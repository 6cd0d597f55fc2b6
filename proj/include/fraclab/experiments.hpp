#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/energy_grid.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"
#include "fraclab/profiles.hpp"
#include "fraclab/radial_spectral.hpp"
#include "fraclab/solver.hpp"

namespace fraclab {

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

/// Ordinary least squares slope of y against x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw DomainError("ols_slope: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

} // namespace detail

// ---------------------------------------------------------------------------
// R-sweep of m(R) and M(R)

struct GridPolicy {
  bool fixed_h = true;
  double h = 0.25;
  std::size_t N = 128;

  GridSpec spec_for(double R) const { return fixed_h ? GridSpec::covering(R, h) : GridSpec::with_points(R, N); }
};

struct SweepRow {
  double R = 0;
  std::size_t N = 0;
  double m = 0;
  double M = 0;
  double gap = 0;
  double rel_gap = 0;
  double nonradiality = 0;  ///< of the M-minimizer
  double min_interior = 0;  ///< smallest M-minimizer value over nodes whose 4 neighbours are in the ball
  bool m_converged = false;
  bool M_converged = false;
  int M_start = 0;
  std::string M_start_name;
  int m_iters = 0;
  int M_iters = 0;
  double m_multiplier_err = 0;
  double M_multiplier_err = 0;
};

struct SweepResult {
  ProblemParams params;
  GridPolicy policy;
  SolveOptions options;
  std::vector<SweepRow> rows;
  std::optional<MinimizationResult<RadialProfile>> m_infty;
  RadialSolveSpec m_infty_spec;
  // Minimizers of the last row, for output.
  GridFunction last_m_minimizer;
  GridFunction last_M_minimizer;

  bool all_converged() const {
    for (const auto& r : rows)
      if (!r.m_converged || !r.M_converged) return false;
    return !m_infty || m_infty->converged;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "R,N,m,M,gap,rel_gap,nonradiality,min_interior,m_converged,M_converged,M_start,m_iters,M_iters\n";
    for (const auto& r : rows)
      os << detail::fmt(r.R) << ',' << r.N << ',' << detail::fmt(r.m) << ',' << detail::fmt(r.M) << ',' << detail::fmt(r.gap)
         << ',' << detail::fmt(r.rel_gap) << ',' << detail::fmt(r.nonradiality) << ',' << detail::fmt(r.min_interior) << ','
         << r.m_converged << ',' << r.M_converged << ',' << r.M_start_name << ',' << r.m_iters << ',' << r.M_iters << '\n';
    if (m_infty)
      os << "inf,," << detail::fmt(m_infty->level) << ",,,,,," << m_infty->converged << ",,,"
         << m_infty->iters << ",\n";
    return os.str();
  }
};

/// Copies u onto a larger grid with the same h and centre (nested node sets).
inline GridFunction embed_nested(const GridFunction& u, const GridSpec& target) {
  const auto& s = u.spec();
  if (target.h != s.h || target.cx != s.cx || target.cy != s.cy || target.N < s.N || (target.N - s.N) % 2 != 0)
    throw DomainError("embed_nested: grids are not nested");
  const std::size_t off = (target.N - s.N) / 2;
  std::vector<double> v(target.size(), 0.0);
  for (std::size_t i = 0; i < s.N; ++i)
    for (std::size_t j = 0; j < s.N; ++j) v[(i + off) * target.N + (j + off)] = u(i, j);
  return GridFunction(target, std::move(v));
}

/// Minimum over masked nodes whose four neighbours are also masked.
inline double min_interior_value(const GridFunction& u) {
  const auto N = u.N();
  const auto& m = u.mask();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < N; ++i)
    for (std::size_t j = 1; j + 1 < N; ++j) {
      const std::size_t k = i * N + j;
      if (m[k] && m[k - 1] && m[k + 1] && m[k - N] && m[k + N]) best = std::min(best, u(i, j));
    }
  return best;
}

/// For each R (ascending): m(R) and M(R) on the same grid; with a fixed-h policy the previous
/// M-minimizer is embedded as an additional start. Optionally appends m(∞).
inline SweepResult sweep_R(const ProblemParams& prm, const std::vector<double>& R_list, const GridPolicy& policy,
                           const SolveOptions& opts, std::optional<RadialSolveSpec> m_infty_spec = RadialSolveSpec{}) {
  for (std::size_t i = 1; i < R_list.size(); ++i)
    if (!(R_list[i] > R_list[i - 1])) throw DomainError("sweep_R: R_list must be strictly ascending");
  SweepResult out;
  out.params = prm;
  out.policy = policy;
  out.options = opts;
  std::optional<GridFunction> previous;
  for (double R : R_list) {
    const auto spec = policy.spec_for(R);
    auto m = solve_m(prm, spec, opts);
    std::optional<GridFunction> warm;
    if (previous && policy.fixed_h) warm = embed_nested(*previous, spec);
    auto M = solve_M(prm, spec, opts, &m.minimizer, warm ? &*warm : nullptr);
    SweepRow row;
    row.R = R;
    row.N = spec.N;
    row.m = m.level;
    row.M = M.level;
    row.gap = m.level - M.level;
    row.rel_gap = row.gap / m.level;
    row.nonradiality = M.nonradiality;
    row.min_interior = min_interior_value(M.minimizer);
    row.m_converged = m.converged;
    row.M_converged = M.converged;
    row.M_start = M.start_index;
    row.M_start_name = M.start_names.at(static_cast<std::size_t>(M.start_index));
    row.m_iters = m.iters;
    row.M_iters = M.iters;
    row.m_multiplier_err = std::abs(m.multiplier / m.level - 1.0);
    row.M_multiplier_err = std::abs(M.multiplier / M.level - 1.0);
    out.rows.push_back(row);
    previous = M.minimizer;
    out.last_m_minimizer = std::move(m.minimizer);
    out.last_M_minimizer = std::move(M.minimizer);
  }
  if (m_infty_spec) {
    out.m_infty_spec = *m_infty_spec;
    out.m_infty = solve_m_infty(prm, *m_infty_spec, opts);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Translated bump

struct BumpSpec {
  double h = 1.0 / 16.0;
  double vx = 1.0;  ///< unit direction of translation
  double vy = 0.0;
};

struct BumpDecayRow {
  double t = 0;
  double seminorm_sq = 0;
  double lower_order = 0;
  double constraint = 0;
  double Q = 0;
  double upper_bound = 0;
};

struct BumpDecayResult {
  std::vector<BumpDecayRow> rows;
  double seminorm_sq_reference = 0;  ///< [u]² of the untranslated bump
  double max_translation_drift = 0;  ///< max_t |[u_t]² / [u]² - 1|
  double fitted_slope = 0;
  double predicted_slope = 0;
  double lower_order_slope = 0;  ///< slope of log(L_t / G_t^{2/p}), the weight-only part of Q

  std::string to_csv() const {
    std::ostringstream os;
    os << "t,Q,upper_bound,seminorm_sq,lower_order,constraint\n";
    for (const auto& r : rows)
      os << detail::fmt(r.t) << ',' << detail::fmt(r.Q) << ',' << detail::fmt(r.upper_bound) << ','
         << detail::fmt(r.seminorm_sq) << ',' << detail::fmt(r.lower_order) << ',' << detail::fmt(r.constraint) << '\n';
    return os.str();
  }
};

/// Quotient of u_t(x) = u(x - t v), u the standard bump on B_1, on grids that travel with the bump.
inline BumpDecayResult bump_decay(const ProblemParams& prm, const std::vector<double>& t_list, const BumpSpec& spec = {}) {
  if (prm.n != 2) throw DomainError("bump_decay: grid experiment is two-dimensional");
  if (!(2.0 * prm.b > prm.a * prm.p)) throw DomainError("bump_decay: requires 2b > ap");
  const double vn = std::hypot(spec.vx, spec.vy);
  if (std::abs(vn - 1.0) > 1e-12) throw DomainError("bump_decay: v must be a unit vector");
  if (t_list.empty()) throw DomainError("bump_decay: empty t list");
  for (double t : t_list)
    if (!(t >= 2.0)) throw DomainError("bump_decay: t values must be >= 2 so the support stays away from the origin");

  auto bump_on = [&](double cx, double cy) {
    const GridSpec g = GridSpec::covering(1.0, spec.h, cx, cy);
    return GridFunction::sample(g, [&](double x, double y) { return profiles::bump(std::hypot(x - cx, y - cy)); });
  };
  BumpDecayResult out;
  out.seminorm_sq_reference = gagliardo_grid(bump_on(0.0, 0.0), prm.s);
  out.predicted_slope = prm.a - 2.0 * prm.b / prm.p;
  std::vector<double> lt, lq, ll;
  for (double t : t_list) {
    const auto u = bump_on(t * spec.vx, t * spec.vy);
    if (u.spec().R > 1.0 + 1e-12) throw DomainError("bump_decay: grid does not contain the translated support");
    BumpDecayRow row;
    row.t = t;
    row.seminorm_sq = gagliardo_grid(u, prm.s);
    row.lower_order = weighted_integral_grid(u, prm.q, prm.a, false);
    row.constraint = weighted_integral_grid(u, prm.p, prm.b, true);
    row.Q = (row.seminorm_sq + row.lower_order) / std::pow(row.constraint, 2.0 / prm.p);
    const double l2 = weighted_integral_grid(u, 2.0, 0.0, false);
    const double lp = weighted_integral_grid(u, prm.p, 0.0, true);
    row.upper_bound = (row.seminorm_sq + std::pow(1.0 + t, prm.a) * l2) / std::pow(std::pow(t - 1.0, prm.b) * lp, 2.0 / prm.p);
    out.max_translation_drift = std::max(out.max_translation_drift, std::abs(row.seminorm_sq / out.seminorm_sq_reference - 1.0));
    out.rows.push_back(row);
    lt.push_back(std::log(t));
    lq.push_back(std::log(row.Q));
    ll.push_back(std::log(row.lower_order / std::pow(row.constraint, 2.0 / prm.p)));
  }
  const std::size_t k = std::min<std::size_t>(4, lt.size());
  if (k >= 2) {
    const std::vector<double> x(lt.end() - static_cast<long>(k), lt.end());
    out.fitted_slope = detail::ols_slope(x, std::vector<double>(lq.end() - static_cast<long>(k), lq.end()));
    out.lower_order_slope = detail::ols_slope(x, std::vector<double>(ll.end() - static_cast<long>(k), ll.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cut-off convergence

struct CutoffRow {
  double R = 0;
  double error = 0;          ///< ‖η_R u - u‖_{H^s_{q,a}}
  double cut_norm = 0;       ///< ‖η_R u‖_{L^q_a}
  double relative_error = 0; ///< error / ‖u‖_{H^s_{q,a}}
};

struct CutoffResult {
  std::vector<CutoffRow> rows;
  double norm = 0;           ///< ‖u‖_{H^s_{q,a}}
  double weighted_norm = 0;  ///< ‖u‖_{L^q_a}

  std::string to_csv() const {
    std::ostringstream os;
    os << "R,error,relative_error,cut_weighted_norm\n";
    for (const auto& r : rows)
      os << detail::fmt(r.R) << ',' << detail::fmt(r.error) << ',' << detail::fmt(r.relative_error) << ','
         << detail::fmt(r.cut_norm) << '\n';
    return os.str();
  }
};

/// η_R(x) = ψ(|x|/R) applied to a radial profile; errors in the H^s_{q,a} norm.
inline CutoffResult cutoff_convergence(const RadialProfile& u, const std::vector<double>& R_list, const ProblemParams& prm,
                                       const RadialGrid& omega_grid) {
  CutoffResult out;
  out.weighted_norm = weighted_norm_radial(u, prm.q, prm.a);
  out.norm = energy_norm_radial(u, prm, omega_grid);
  for (double R : R_list) {
    if (!(R > 0.0)) throw DomainError("cutoff_convergence: R must be positive");
    RadialProfile diff = u, cut = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double eta = cutoff_psi(u.grid[i] / R);
      cut.values[i] = eta * u.values[i];
      diff.values[i] = cut.values[i] - u.values[i];
    }
    CutoffRow row;
    row.R = R;
    row.error = energy_norm_radial(diff, prm, omega_grid);
    row.cut_norm = weighted_norm_radial(cut, prm.q, prm.a);
    row.relative_error = out.norm > 0.0 ? row.error / out.norm : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

inline CutoffResult cutoff_convergence(const RadialProfile& u, const std::vector<double>& R_list, const ProblemParams& prm) {
  return cutoff_convergence(u, R_list, prm, default_frequency_grid());
}

// ---------------------------------------------------------------------------
// Inequality surveys

struct SurveyRow {
  std::string member_id;
  double ratio = 0;
  double seminorm = 0;
  double weighted_norm = 0;
  bool skipped = false;
  std::string note;
};

struct SurveyResult {
  std::string family;
  std::vector<SurveyRow> rows;
  double max_ratio = 0;
  std::string max_member;

  std::string to_csv() const {
    std::ostringstream os;
    os << "member_id,ratio,seminorm,weighted_norm,note\n";
    for (const auto& r : rows)
      os << r.member_id << ',' << (r.skipped ? std::string("nan") : detail::fmt(r.ratio)) << ',' << detail::fmt(r.seminorm)
         << ',' << detail::fmt(r.weighted_norm) << ',' << r.note << '\n';
    return os.str();
  }

  void finalize() {
    max_ratio = 0.0;
    for (const auto& r : rows)
      if (!r.skipped && r.ratio > max_ratio) {
        max_ratio = r.ratio;
        max_member = r.member_id;
      }
  }
};

struct FamilySpec {
  std::string name = "standard-v1";
  std::uint64_t seed = 7;
  int random_count = 10;
  std::size_t points = 2048;  ///< radius grid size on [1e-3, 64]; the frequency grid scales with it

  RadialGrid radius_grid() const { return RadialGrid::softplus(1e-3, 64.0, points); }
  RadialGrid frequency_grid() const { return RadialGrid::softplus(1e-3, 96.0, points * 3 / 2); }

  std::vector<profiles::FamilyMember> members(int n) const {
    if (name != "standard-v1") throw DomainError("unknown family: " + name);
    return profiles::standard_family(radius_grid(), n, seed, random_count);
  }
};

/// Strauss ratio over every member; degenerate or unresolved members become skipped rows.
inline SurveyResult strauss_survey(const ProblemParams& prm, const FamilySpec& fam) {
  SurveyResult out;
  out.family = fam.name;
  const auto wg = fam.frequency_grid();
  for (auto& m : fam.members(prm.n)) {
    SurveyRow row;
    row.member_id = m.id;
    try {
      row.seminorm = gagliardo_radial(m.profile, prm.s, wg);
      row.weighted_norm = weighted_norm_radial(m.profile, prm.q, prm.a);
      row.ratio = strauss_ratio(m.profile, prm, wg);
    } catch (const DomainError&) {
      row.skipped = true;
      row.note = "skipped: zero norm";
    } catch (const TruncationError&) {
      row.skipped = true;
      row.note = "skipped: unresolved on grid";
    }
    out.rows.push_back(row);
  }
  out.finalize();
  return out;
}

/// (∫|x|^b |u|^p)^{1/p} / ([u]^η (∫|x|^a |u|^q)^{(1-η)/q}).
inline double gn_ratio(const RadialProfile& u, const ProblemParams& prm, const RadialGrid& omega_grid) {
  const auto ex = exponents(prm);
  const double lhs = weighted_norm_radial(u, prm.p, prm.b);
  const double semi = gagliardo_radial(u, prm.s, omega_grid);
  const double wn = weighted_norm_radial(u, prm.q, prm.a);
  const double rhs = std::pow(semi, ex.eta) * std::pow(wn, 1.0 - ex.eta);
  if (!(rhs > 0.0)) throw DomainError("gn_ratio: zero profile");
  return lhs / rhs;
}

struct GnSurveyResult {
  SurveyResult survey;
  std::vector<double> lambdas;
  /// Per member: ratios of the dilates u(λ·) in the order of `lambdas`; empty when any dilate was skipped.
  std::vector<std::vector<double>> dilation_ratios;
  double max_dilation_drift = 0;  ///< max over members of (max/min - 1) across λ
  std::size_t dilation_members = 0;
};

/// Gagliardo–Nirenberg ratio over the family, and its drift under u ↦ u(λ·).
inline GnSurveyResult gn_survey(const ProblemParams& prm, const FamilySpec& fam,
                                const std::vector<double>& lambdas = {0.25, 1.0, 4.0}) {
  GnSurveyResult out;
  out.survey.family = fam.name;
  out.lambdas = lambdas;
  const auto rg = fam.radius_grid();
  const auto wg = fam.frequency_grid();
  for (auto& m : fam.members(prm.n)) {
    SurveyRow row;
    row.member_id = m.id;
    try {
      row.seminorm = gagliardo_radial(m.profile, prm.s, wg);
      row.weighted_norm = weighted_norm_radial(m.profile, prm.q, prm.a);
      row.ratio = gn_ratio(m.profile, prm, wg);
    } catch (const DomainError&) {
      row.skipped = true;
      row.note = "skipped: zero norm";
    } catch (const TruncationError&) {
      row.skipped = true;
      row.note = "skipped: unresolved on grid";
    }
    out.survey.rows.push_back(row);
  }
  out.survey.finalize();

  // Dilates are resampled from the closed forms.
  for (const auto& g : profiles::standard_generators(prm.n, fam.seed, fam.random_count)) {
    std::vector<double> ratios;
    try {
      for (double lam : lambdas) {
        const auto d = RadialProfile::sample(rg, prm.n, [&](double r) { return g.f(lam * r); });
        ratios.push_back(gn_ratio(d, prm, wg));
      }
    } catch (const TruncationError&) {
      ratios.clear();
    } catch (const DomainError&) {
      ratios.clear();
    }
    if (ratios.size() == lambdas.size()) {
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      out.max_dilation_drift = std::max(out.max_dilation_drift, *hi / *lo - 1.0);
      ++out.dilation_members;
    } else {
      ratios.clear();
    }
    out.dilation_ratios.push_back(std::move(ratios));
  }
  return out;
}

} // namespace fraclab
