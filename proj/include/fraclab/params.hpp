#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

/// Parameters of  -(-Δ)^s u + |x|^a |u|^{q-2} u = |x|^b |u|^{p-2} u  in R^n.
struct ProblemParams {
  int n = 2;
  double s = 0.75;
  double p = 3.0;
  double q = 2.0;
  double a = 0.5;
  double b = 1.0;

  /// Throws DomainError unless n >= 2, 0 < s < 1, p > 2, q >= 1, a > -n, b >= 0.
  void check_domain() const {
    if (n < 2) throw DomainError("n must be >= 2");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    if (!(p > 2.0)) throw DomainError("p must be > 2");
    if (!(q >= 1.0)) throw DomainError("q must be >= 1");
    if (!(a > -n)) throw DomainError("a must be > -n");
    if (!(b >= 0.0)) throw DomainError("b must be >= 0");
  }

  bool operator==(const ProblemParams&) const = default;
};

/// Closed-form exponents, written once for any field type so that the tests
/// can evaluate them in exact rational arithmetic.
namespace formulas {

template <class T>
T theta_denominator(const T& s, const T& q) {
  return T(2) * s * q + T(2) - q;
}

template <class T>
T theta(const T& s, const T& q) {
  const T d = theta_denominator(s, q);
  if (!(d > T(0))) throw DomainError("theta: 2sq + 2 - q must be positive");
  return T(2) / d;
}

template <class T>
T sigma(const T& n, const T& s, const T& q, const T& a) {
  const T d = theta_denominator(s, q);
  if (!(d > T(0))) throw DomainError("sigma: 2qs - q + 2 must be positive");
  return (T(2) * a * s + T(2) * n * s - a - T(2) * s) / d;
}

/// sigma as the convex combination theta (n-1)/2 + (1-theta)(n-1+a)/q.
template <class T>
T sigma_interpolated(const T& n, const T& s, const T& q, const T& a) {
  const T th = theta(s, q);
  return th * (n - T(1)) / T(2) + (T(1) - th) * (n - T(1) + a) / q;
}

template <class T>
T alpha(const T& s, const T& q) {
  const T d = s + T(1) / q - T(1) / T(2);
  if (d == T(0)) throw DomainError("alpha: s + 1/q - 1/2 vanishes");
  return (s - T(1) / T(2)) / d;
}

template <class T>
T sobolev_critical(const T& n, const T& s) {
  if (n == T(2) * s) throw DomainError("2* undefined for n = 2s");
  return T(2) * n / (n - T(2) * s);
}

template <class T>
T sobolev_critical_shifted(const T& n, const T& s, const T& b) {
  if (n == T(2) * s) throw DomainError("2*_b undefined for n = 2s");
  return T(2) * (n + b) / (n - T(2) * s);
}

/// c with p = 2(n + c)/(n - 2s).
template <class T>
T shifted_power(const T& n, const T& s, const T& p) {
  return p * (n - T(2) * s) / T(2) - n;
}

template <class T>
T eta(const T& e1, const T& e2, const T& th, const T& p, const T& q) {
  const T sum = e1 + e2;
  if (sum == T(0)) throw DomainError("eta: e1 + e2 vanishes");
  return e2 / sum + th * (T(1) - q / p) * (e1 / sum);
}

/// Exponent of lambda picked up by [u]^theta ||u||_{L^q_a}^{1-theta} under u -> u(lambda x).
template <class T>
T strauss_rhs_dilation_exponent(const T& n, const T& s, const T& q, const T& a) {
  const T th = theta(s, q);
  return (s - n / T(2)) * th - (n + a) * (T(1) - th) / q;
}

} // namespace formulas

struct ExponentSet {
  double theta = 0;
  double sigma = 0;
  double alpha = 0;
  double sob_crit = 0;          ///< 2*   = 2n/(n-2s)
  double sob_crit_shifted = 0;  ///< 2*_b = 2(n+b)/(n-2s)
  double c = 0;                 ///< p = 2(n+c)/(n-2s)
  double e1 = 0;                ///< b - c
  double e2 = 0;                ///< sigma (p-q) - (b-a)
  double eta = 0;
};

inline ExponentSet exponents(const ProblemParams& prm) {
  prm.check_domain();
  const double n = prm.n;
  ExponentSet e;
  e.theta = formulas::theta(prm.s, prm.q);
  e.sigma = formulas::sigma(n, prm.s, prm.q, prm.a);
  e.alpha = formulas::alpha(prm.s, prm.q);
  e.sob_crit = formulas::sobolev_critical(n, prm.s);
  e.sob_crit_shifted = formulas::sobolev_critical_shifted(n, prm.s, prm.b);
  e.c = formulas::shifted_power(n, prm.s, prm.p);
  e.e1 = prm.b - e.c;
  e.e2 = e.sigma * (prm.p - prm.q) - (prm.b - prm.a);
  e.eta = formulas::eta(e.e1, e.e2, e.theta, prm.p, prm.q);
  return e;
}

// ---------------------------------------------------------------------------
// Admissibility

struct AdmissibilityCheck {
  std::string name;
  std::string group;
  std::string inequality;  ///< rendered with the numbers substituted
  bool pass = false;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCheck> checks;
  /// Conditions recorded for information only; they do not enter the verdict.
  std::vector<std::string> notes;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  /// Conjunction of the checks in one group.
  bool group_pass(const std::string& group) const {
    for (const auto& c : checks)
      if (c.group == group && !c.pass) return false;
    return true;
  }

  const AdmissibilityCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  std::string to_table() const {
    std::size_t w_name = 4, w_group = 5;
    for (const auto& c : checks) {
      w_name = std::max(w_name, c.name.size());
      w_group = std::max(w_group, c.group.size());
    }
    std::ostringstream os;
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
    os << pad("check", w_name) << "  " << pad("group", w_group) << "  verdict  inequality\n";
    for (const auto& c : checks)
      os << pad(c.name, w_name) << "  " << pad(c.group, w_group) << "  " << (c.pass ? "pass   " : "FAIL   ")
         << "  " << c.inequality << "\n";
    for (const auto& note : notes) os << "note: " << note << "\n";
    os << "overall: " << (all_pass() ? "admissible" : "not admissible") << "\n";
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "name,group,inequality,pass\n";
    for (const auto& c : checks) os << c.name << ',' << c.group << ",\"" << c.inequality << "\"," << (c.pass ? 1 : 0) << "\n";
    return os.str();
  }
};

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline AdmissibilityCheck less(std::string name, std::string group, std::string lhs_expr, double lhs,
                               std::string rhs_expr, double rhs, bool strict = true) {
  AdmissibilityCheck c;
  c.name = std::move(name);
  c.group = std::move(group);
  c.pass = strict ? (lhs < rhs) : (lhs <= rhs);
  c.inequality = lhs_expr + " = " + num(lhs) + (strict ? " < " : " <= ") + rhs_expr + " = " + num(rhs);
  return c;
}

} // namespace detail

/// Evaluates the hypotheses of the ball symmetry-breaking theorem (q = 2), the
/// compact radial embedding theorem (general q), and the two stated forms of
/// the Strauss weight restriction. Failures are reported, never thrown.
inline AdmissibilityReport validate(const ProblemParams& prm) {
  using detail::less;
  const double n = prm.n, s = prm.s, p = prm.p, q = prm.q, a = prm.a, b = prm.b;
  const double crit = (n > 2 * s) ? 2 * n / (n - 2 * s) : INFINITY;
  const double crit_b = (n > 2 * s) ? 2 * (n + b) / (n - 2 * s) : INFINITY;

  AdmissibilityReport r;
  const std::string sb = "symmetry-breaking";
  r.checks.push_back(less("n>=2", sb, "2", 2, "n", n, false));
  r.checks.push_back(less("s>1/2", sb, "1/2", 0.5, "s", s));
  r.checks.push_back(less("s<1", sb, "s", s, "1", 1));
  r.checks.push_back(less("s<n/2", sb, "s", s, "n/2", n / 2));
  r.checks.push_back(less("p>2", sb, "2", 2, "p", p));
  r.checks.push_back(less("p<2*", sb, "p", p, "2*", crit));
  r.checks.push_back(less("a>0", sb, "0", 0, "a", a));
  r.checks.push_back(less("a<n", sb, "a", a, "n", n));
  r.checks.push_back(less("b>ap/2", sb, "ap/2", a * p / 2, "b", b));
  r.checks.push_back(less("compactness", sb, "a(p-2-2ps)+4bs", a * (p - 2 - 2 * p * s) + 4 * b * s,
                          "2s(p-2)(n-1)", 2 * s * (p - 2) * (n - 1)));
  {
    AdmissibilityCheck c;
    c.name = "q=2";
    c.group = sb;
    c.pass = (q == 2.0);
    c.inequality = "q = " + detail::num(q) + (c.pass ? " == 2" : " != 2");
    r.checks.push_back(c);
  }

  const std::string ce = "compact-embedding";
  r.checks.push_back(less("1<q", ce, "1", 1, "q", q));
  r.checks.push_back(less("q<p", ce, "q", q, "p", p));
  r.checks.push_back(less("p<2*_b", ce, "p", p, "2*_b", crit_b));
  r.checks.push_back(less("a<n(q-1)", ce, "a", a, "n(q-1)", n * (q - 1)));
  r.checks.push_back(less("cond-ab", ce, "a(p-2-2ps)+b(2qs-q+2)", a * (p - 2 - 2 * p * s) + b * (2 * q * s - q + 2),
                          "2s(p-q)(n-1)", 2 * s * (p - q) * (n - 1)));

  const std::string st = "strauss";
  r.checks.push_back(less("a>=-(n-1)", st, "-(n-1)", -(n - 1), "a", a, false));
  r.checks.push_back(less("a<n(q-1)[thm]", st, "a", a, "n(q-1)", n * (q - 1)));
  r.checks.push_back(less("a<(n-1)q[remark]", st, "a", a, "(n-1)q", (n - 1) * q));

  r.notes.push_back("radial multiplicity corollary states s > n/2, inconsistent with s < min(1, n/2); "
                    "not evaluated (s > n/2 is " + std::string(s > n / 2 ? "true" : "false") + " here)");
  return r;
}

// ---------------------------------------------------------------------------
// Minimum of C1 x^e1 + C2 x^-e2 on (0, inf)

struct TwoTermOptimum {
  double lambda0 = 0;
  double fmin = 0;
  double k = 0;  ///< fmin / (C1^{e2/(e1+e2)} C2^{e1/(e1+e2)}), depends on e1, e2 only
  double C1 = 0, C2 = 0, e1 = 0, e2 = 0;

  double value_at(double lambda) const { return C1 * std::pow(lambda, e1) + C2 * std::pow(lambda, -e2); }
};

inline TwoTermOptimum optimize_two_term(double C1, double C2, double e1, double e2) {
  if (!(C1 > 0 && C2 > 0 && e1 > 0 && e2 > 0)) throw DomainError("optimize_two_term: all inputs must be positive");
  TwoTermOptimum r{};
  r.C1 = C1;
  r.C2 = C2;
  r.e1 = e1;
  r.e2 = e2;
  const double sum = e1 + e2;
  r.lambda0 = std::pow(C2 * e2 / (C1 * e1), 1.0 / sum);
  r.fmin = r.value_at(r.lambda0);
  r.k = std::pow(e2 / e1, e1 / sum) + std::pow(e1 / e2, e2 / sum);
  const double factored = std::pow(C1, e2 / sum) * std::pow(C2, e1 / sum) * r.k;
  if (std::abs(factored - r.fmin) > 1e-9 * r.fmin)
    throw ConsistencyError("optimize_two_term: factored minimum disagrees with direct evaluation");
  return r;
}

} // namespace fraclab
