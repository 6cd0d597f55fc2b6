#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/params.hpp"
#include "fraclab/solver.hpp"

namespace fraclab {

using ConfigEntries = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("bad value for key '" + key + "': '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad boolean for key '" + key + "': '" + text + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
  return out;
}

} // namespace detail

/// key = value lines; '#' comments; duplicate keys rejected.
inline ConfigEntries parse_config_text(std::istream& is) {
  ConfigEntries out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  return out;
}

inline ConfigEntries parse_config_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config_text(is);
}

/// Typed view of a complete set of entries.
struct RunConfig {
  ConfigEntries entries;  ///< effective configuration, every known key present

  ProblemParams params;
  double R = 16;
  GridPolicy grid;
  SolveOptions solver;
  RadialSolveSpec rn;
  double rn_tail_tol = 1e-3;
  std::vector<double> sweep_R;
  bool sweep_m_infty = true;
  std::vector<double> bump_t;
  double bump_h = 0.0625;
  std::vector<double> cutoff_R;
  std::string cutoff_profile;
  double cutoff_width = 1;
  FamilySpec family;
  std::vector<double> gn_lambdas;
  std::string output_dir;

  /// Builds the typed view; every key of `entries` must be known and every known key present.
  static RunConfig from_entries(const ConfigEntries& e, const std::set<std::string>& known) {
    for (const auto& [k, v] : e)
      if (!known.count(k)) throw ConfigError("unknown key '" + k + "'");
    for (const auto& k : known)
      if (!e.count(k)) throw ConfigError("missing key '" + k + "'");
    using detail::parse_number;
    auto get = [&](const std::string& k) -> const std::string& { return e.at(k); };
    auto num = [&](const std::string& k) { return parse_number<double>(k, get(k)); };

    RunConfig c;
    c.entries = e;
    c.params.n = parse_number<int>("n", get("n"));
    c.params.s = num("s");
    c.params.p = num("p");
    c.params.q = num("q");
    c.params.a = num("a");
    c.params.b = num("b");
    c.params.check_domain();
    c.R = num("R");
    if (!(c.R > 0)) throw ConfigError("R must be positive");

    const auto& pol = get("grid.policy");
    if (pol != "fixed_h" && pol != "fixed_N") throw ConfigError("grid.policy must be fixed_h or fixed_N");
    c.grid.fixed_h = pol == "fixed_h";
    c.grid.h = num("grid.h");
    c.grid.N = parse_number<std::size_t>("grid.N", get("grid.N"));

    c.solver.max_iters = parse_number<int>("solver.max_iters", get("solver.max_iters"));
    c.solver.grad_tol = num("solver.grad_tol");
    c.solver.step0 = num("solver.step0");
    c.solver.armijo_c = num("solver.armijo_c");
    c.solver.seed = parse_number<std::uint64_t>("solver.seed", get("solver.seed"));
    const auto& dir = get("solver.direction");
    if (dir != "conjugate" && dir != "gradient") throw ConfigError("solver.direction must be conjugate or gradient");
    c.solver.direction = dir == "conjugate" ? Direction::conjugate : Direction::gradient;
    c.solver.threads = parse_number<unsigned>("solver.threads", get("solver.threads"));
    c.solver.record_trace = detail::parse_bool("solver.trace", get("solver.trace"));
    try {
      c.solver.check();
    } catch (const DomainError& ex) {
      throw ConfigError(ex.what());
    }

    c.rn.L = num("rn.L");
    c.rn.dr = num("rn.dr");
    c.rn.omega_max = num("rn.omega_max");
    c.rn_tail_tol = num("rn.tail_tol");

    c.sweep_R = detail::parse_list("sweep.R_list", get("sweep.R_list"));
    c.sweep_m_infty = detail::parse_bool("sweep.m_infty", get("sweep.m_infty"));
    c.bump_t = detail::parse_list("bump.t_list", get("bump.t_list"));
    c.bump_h = num("bump.h");
    c.cutoff_R = detail::parse_list("cutoff.R_list", get("cutoff.R_list"));
    c.cutoff_profile = get("cutoff.profile");
    if (c.cutoff_profile != "gaussian" && c.cutoff_profile != "bump")
      throw ConfigError("cutoff.profile must be gaussian or bump");
    c.cutoff_width = num("cutoff.width");

    c.family.name = get("family.name");
    c.family.seed = parse_number<std::uint64_t>("family.seed", get("family.seed"));
    c.family.random_count = parse_number<int>("family.random_count", get("family.random_count"));
    c.family.points = parse_number<std::size_t>("family.points", get("family.points"));
    c.gn_lambdas = detail::parse_list("gn.lambdas", get("gn.lambdas"));
    c.output_dir = get("output.dir");
    return c;
  }

  /// Serialises the entries back to key = value text.
  std::string to_text() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
    return os.str();
  }
};

inline constexpr const char* kRequiredKeys[] = {"n", "s", "p", "q", "a", "b"};

/// Merges a user configuration over the defaults. Unknown keys and missing problem
/// parameters are ConfigErrors.
inline RunConfig load_config(const ConfigEntries& defaults, const ConfigEntries& user) {
  std::set<std::string> known;
  for (const auto& [k, v] : defaults) known.insert(k);
  for (const auto& [k, v] : user)
    if (!known.count(k)) throw ConfigError("unknown key '" + k + "'");
  for (const char* k : kRequiredKeys)
    if (!user.count(k)) throw ConfigError(std::string("missing key '") + k + "'");
  ConfigEntries merged = defaults;
  for (const auto& [k, v] : user) merged[k] = v;
  return RunConfig::from_entries(merged, known);
}

} // namespace fraclab
