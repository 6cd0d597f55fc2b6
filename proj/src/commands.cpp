#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fraclab/default_conf.hpp"
#include "fraclab/fraclab.hpp"

namespace fraclab::cli {

namespace {

std::string num(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

RunConfig effective_config(const CliOptions& o) {
  const auto defaults = parse_config_text(std::string(kDefaultConfigText));
  ConfigEntries user = defaults;
  if (o.config_path) {
    std::ifstream is(*o.config_path);
    if (!is) throw ConfigError("cannot open config file " + *o.config_path);
    user = parse_config_text(is);
  }
  if (o.seed) {
    user["solver.seed"] = std::to_string(*o.seed);
    user["family.seed"] = std::to_string(*o.seed);
  }
  if (o.threads) user["solver.threads"] = std::to_string(*o.threads);
  if (o.out_dir) {
    user["output.dir"] = *o.out_dir;
  } else if (const char* env = std::getenv("FRACLAB_OUT"); env && *env) {
    user["output.dir"] = env;
  }
  return load_config(defaults, user);
}

std::string result_csv(const std::string& label, const MinimizationResult<GridFunction>& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "problem,level,multiplier,constraint_residual,nonradiality,residual,iters,converged,stop_reason,start\n";
  os << label << ',' << r.level << ',' << r.multiplier << ',' << r.constraint_residual << ',' << r.nonradiality << ','
     << r.residual << ',' << r.iters << ',' << r.converged << ',' << r.stop_reason << ','
     << (r.start_names.empty() ? std::string("centered") : r.start_names.at(static_cast<std::size_t>(r.start_index)))
     << '\n';
  return os.str();
}

template <class Point>
std::string trace_csv(const MinimizationResult<Point>& r) {
  std::ostringstream os;
  os << std::setprecision(12) << "iter,level,grad_norm,step\n";
  for (const auto& t : r.trace) os << t.iter << ',' << t.level << ',' << t.residual << ',' << t.step << '\n';
  return os.str();
}

std::string grid_csv(const GridFunction& u) {
  std::ostringstream os;
  write_grid_csv(os, u);
  return os.str();
}

std::string profile_csv(const RadialProfile& u) {
  std::ostringstream os;
  write_profile_csv(os, u);
  return os.str();
}

int cmd_exponents(const RunConfig& cfg, const CliOptions& o, std::ostream& out) {
  const auto e = exponents(cfg.params);
  const auto rep = validate(cfg.params);
  out << std::setprecision(10);
  out << "n=" << cfg.params.n << " s=" << cfg.params.s << " p=" << cfg.params.p << " q=" << cfg.params.q
      << " a=" << cfg.params.a << " b=" << cfg.params.b << "\n";
  out << "theta            " << e.theta << "\n"
      << "sigma            " << e.sigma << "\n"
      << "alpha            " << e.alpha << "\n"
      << "2*               " << e.sob_crit << "\n"
      << "2*_b             " << e.sob_crit_shifted << "\n"
      << "c                " << e.c << "\n"
      << "e1               " << e.e1 << "\n"
      << "e2               " << e.e2 << "\n"
      << "eta              " << e.eta << "\n\n";
  out << rep.to_table();
  out << "admissible=" << (rep.all_pass() ? "yes" : "no") << " eta=" << num(e.eta, 6) << "\n";
  if (o.strict && !rep.all_pass()) return kStrict;
  return kOk;
}

int cmd_solve_radial(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.grid.spec_for(cfg.R);
  const auto r = solve_m(cfg.params, spec, cfg.solver);
  OutputSink sink(cfg.output_dir, "solve-radial");
  sink.write_csv(result_csv("m", r));
  sink.write_csv(grid_csv(r.minimizer), "minimizer");
  if (cfg.solver.record_trace) sink.write_csv(trace_csv(r), "trace");
  std::vector<double> it, lv;
  for (const auto& t : r.trace) {
    it.push_back(t.iter);
    lv.push_back(t.level);
  }
  if (!it.empty()) sink.write_dat("level", "iter", "level", it, lv);
  auto man = make_manifest("solve-radial", sink.timestamp(), cfg);
  man["result"] = {{"level", r.level}, {"iters", r.iters}, {"converged", r.converged}, {"N", spec.N}, {"h", spec.h}};
  sink.write_manifest(man);
  out << "m(R=" << num(cfg.R) << ")=" << num(r.level, 8) << " iters=" << r.iters << " converged=" << r.converged << "\n";
  return r.converged ? kOk : kNotConverged;
}

int cmd_solve_full(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.grid.spec_for(cfg.R);
  const auto m = solve_m(cfg.params, spec, cfg.solver);
  const auto r = solve_M(cfg.params, spec, cfg.solver, &m.minimizer);
  OutputSink sink(cfg.output_dir, "solve-full");
  sink.write_csv(result_csv("m", m) + result_csv("M", r).substr(result_csv("M", r).find('\n') + 1));
  sink.write_csv(grid_csv(r.minimizer), "minimizer");
  if (cfg.solver.record_trace) sink.write_csv(trace_csv(r), "trace");
  {
    std::ostringstream os;
    os << std::setprecision(12) << "start,level,converged\n";
    for (std::size_t i = 0; i < r.start_names.size(); ++i)
      os << r.start_names[i] << ',' << r.start_levels[i] << ',' << r.start_converged[i] << '\n';
    sink.write_csv(os.str(), "starts");
  }
  auto man = make_manifest("solve-full", sink.timestamp(), cfg);
  man["result"] = {{"m", m.level}, {"M", r.level}, {"start", r.start_names.at(static_cast<std::size_t>(r.start_index))},
                   {"nonradiality", r.nonradiality}, {"converged", m.converged && r.converged}};
  sink.write_manifest(man);
  out << "M(R=" << num(cfg.R) << ")=" << num(r.level, 8) << " m=" << num(m.level, 8)
      << " start=" << r.start_names.at(static_cast<std::size_t>(r.start_index)) << " nonradiality=" << num(r.nonradiality, 4)
      << "\n";
  return (m.converged && r.converged) ? kOk : kNotConverged;
}

int cmd_solve_rn(const RunConfig& cfg, std::ostream& out) {
  const auto r = solve_m_infty(cfg.params, cfg.rn, cfg.solver, cfg.rn_tail_tol);
  OutputSink sink(cfg.output_dir, "solve-rn");
  {
    std::ostringstream os;
    os << std::setprecision(12) << "problem,level,multiplier,constraint_residual,residual,iters,converged,stop_reason,tail_ratio\n"
       << "m_infty," << r.level << ',' << r.multiplier << ',' << r.constraint_residual << ',' << r.residual << ',' << r.iters
       << ',' << r.converged << ',' << r.stop_reason << ',' << r.tail_ratio << '\n';
    sink.write_csv(os.str());
  }
  sink.write_csv(profile_csv(r.minimizer), "profile");
  sink.write_dat("profile", "r", "u", r.minimizer.grid.radii(), r.minimizer.values);
  if (cfg.solver.record_trace) sink.write_csv(trace_csv(r), "trace");
  auto man = make_manifest("solve-rn", sink.timestamp(), cfg);
  man["result"] = {{"level", r.level}, {"converged", r.converged}, {"tail_ratio", r.tail_ratio},
                   {"truncation_suspect", r.truncation_suspect}};
  sink.write_manifest(man);
  out << "m(inf)=" << num(r.level, 8) << " tail_ratio=" << num(r.tail_ratio, 3)
      << (r.truncation_suspect ? " truncation-suspect" : "") << " converged=" << r.converged << "\n";
  return r.converged ? kOk : kNotConverged;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::optional<RadialSolveSpec> rn;
  if (cfg.sweep_m_infty) rn = cfg.rn;
  const auto res = sweep_R(cfg.params, cfg.sweep_R, cfg.grid, cfg.solver, rn);
  OutputSink sink(cfg.output_dir, "sweep");
  sink.write_csv(res.to_csv());
  std::vector<double> R, m, M, gap;
  for (const auto& r : res.rows) {
    R.push_back(r.R);
    m.push_back(r.m);
    M.push_back(r.M);
    gap.push_back(r.rel_gap);
  }
  sink.write_dat("m", "R", "m", R, m);
  sink.write_dat("M", "R", "M", R, M);
  sink.write_dat("rel_gap", "R", "rel_gap", R, gap);
  sink.write_csv(grid_csv(res.last_M_minimizer), "M_minimizer");
  auto man = make_manifest("sweep", sink.timestamp(), cfg);
  if (res.m_infty) man["m_infty"] = {{"level", res.m_infty->level}, {"tail_ratio", res.m_infty->tail_ratio}};
  man["all_converged"] = res.all_converged();
  sink.write_manifest(man);
  const auto& last = res.rows.back();
  out << "gap(R=" << num(last.R) << ")=" << num(last.gap, 6) << " rel=" << num(last.rel_gap, 4)
      << " nonradiality=" << num(last.nonradiality, 4);
  if (res.m_infty) out << " m(inf)=" << num(res.m_infty->level, 6);
  out << "\n";
  return res.all_converged() ? kOk : kNotConverged;
}

int cmd_bump(const RunConfig& cfg, std::ostream& out) {
  BumpSpec spec;
  spec.h = cfg.bump_h;
  const auto res = bump_decay(cfg.params, cfg.bump_t, spec);
  OutputSink sink(cfg.output_dir, "bump");
  sink.write_csv(res.to_csv());
  std::vector<double> lt, lq, lb;
  for (const auto& r : res.rows) {
    lt.push_back(std::log(r.t));
    lq.push_back(std::log(r.Q));
    lb.push_back(std::log(r.upper_bound));
  }
  sink.write_dat("logQ", "log_t", "log_Q", lt, lq);
  sink.write_dat("logbound", "log_t", "log_bound", lt, lb);
  auto man = make_manifest("bump", sink.timestamp(), cfg);
  man["result"] = {{"fitted_slope", res.fitted_slope}, {"predicted_slope", res.predicted_slope},
                   {"lower_order_slope", res.lower_order_slope}, {"translation_drift", res.max_translation_drift}};
  sink.write_manifest(man);
  out << "slope=" << num(res.fitted_slope, 4) << " predicted=" << num(res.predicted_slope, 4)
      << " drift=" << num(res.max_translation_drift, 3) << "\n";
  return kOk;
}

int cmd_cutoff(const RunConfig& cfg, std::ostream& out) {
  const double w = cfg.cutoff_width;
  const auto u = cfg.cutoff_profile == "gaussian"
                     ? RadialProfile::sample(default_radial_grid(), cfg.params.n, [w](double r) { return profiles::gaussian(r, w); })
                     : RadialProfile::sample(default_radial_grid(), cfg.params.n, [w](double r) { return profiles::bump(r, w); });
  const auto res = cutoff_convergence(u, cfg.cutoff_R, cfg.params);
  OutputSink sink(cfg.output_dir, "cutoff");
  sink.write_csv(res.to_csv());
  std::vector<double> R, err;
  for (const auto& r : res.rows) {
    R.push_back(r.R);
    err.push_back(r.error);
  }
  sink.write_dat("error", "R", "error", R, err);
  auto man = make_manifest("cutoff", sink.timestamp(), cfg);
  man["cutoff_psi"] = kCutoffPsiId;
  man["result"] = {{"norm", res.norm}, {"final_error", res.rows.back().error}};
  sink.write_manifest(man);
  out << "error(R=" << num(res.rows.back().R) << ")=" << num(res.rows.back().error, 4)
      << " relative=" << num(res.rows.back().relative_error, 4) << "\n";
  return kOk;
}

void write_survey(OutputSink& sink, const SurveyResult& s) {
  sink.write_csv(s.to_csv());
  std::vector<double> idx, ratio;
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    if (!s.rows[i].skipped) {
      idx.push_back(static_cast<double>(i));
      ratio.push_back(s.rows[i].ratio);
    }
  sink.write_dat("ratio", "member", "ratio", idx, ratio);
}

int cmd_strauss(const RunConfig& cfg, std::ostream& out) {
  const auto res = strauss_survey(cfg.params, cfg.family);
  OutputSink sink(cfg.output_dir, "strauss");
  write_survey(sink, res);
  auto man = make_manifest("strauss", sink.timestamp(), cfg);
  man["family"] = {{"name", cfg.family.name}, {"seed", cfg.family.seed}, {"random_count", cfg.family.random_count}};
  man["result"] = {{"max_ratio", res.max_ratio}, {"max_member", res.max_member}};
  sink.write_manifest(man);
  out << "max ratio=" << num(res.max_ratio, 6) << " member=" << res.max_member << "\n";
  return kOk;
}

int cmd_gn(const RunConfig& cfg, std::ostream& out) {
  const auto res = gn_survey(cfg.params, cfg.family, cfg.gn_lambdas);
  OutputSink sink(cfg.output_dir, "gn");
  write_survey(sink, res.survey);
  {
    std::ostringstream os;
    os << std::setprecision(12) << "member_id";
    for (double l : res.lambdas) os << ",lambda_" << l;
    os << '\n';
    for (std::size_t k = 0; k < res.dilation_ratios.size(); ++k) {
      os << res.survey.rows.at(k).member_id;
      if (res.dilation_ratios[k].empty())
        for (std::size_t j = 0; j < res.lambdas.size(); ++j) os << ",nan";
      else
        for (double v : res.dilation_ratios[k]) os << ',' << v;
      os << '\n';
    }
    sink.write_csv(os.str(), "dilation");
  }
  const double eta = exponents(cfg.params).eta;
  auto man = make_manifest("gn", sink.timestamp(), cfg);
  man["result"] = {{"max_ratio", res.survey.max_ratio}, {"dilation_drift", res.max_dilation_drift}, {"eta", eta}};
  sink.write_manifest(man);
  out << "max ratio=" << num(res.survey.max_ratio, 6) << " member=" << res.survey.max_member
      << " drift=" << num(res.max_dilation_drift, 3) << " eta=" << num(eta, 6) << "\n";
  return kOk;
}

} // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"exponents", "solve-radial", "solve-full", "solve-rn", "sweep",
                                                 "bump",      "cutoff",       "strauss",    "gn"};
  return names;
}

int run(const CliOptions& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = effective_config(o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    if (o.command == "exponents") return cmd_exponents(cfg, o, out);
    if (o.strict && !validate(cfg.params).all_pass()) {
      err << "error: parameters fail the admissibility checks (--strict)\n";
      return kStrict;
    }
    if (o.command == "solve-radial") return cmd_solve_radial(cfg, out);
    if (o.command == "solve-full") return cmd_solve_full(cfg, out);
    if (o.command == "solve-rn") return cmd_solve_rn(cfg, out);
    if (o.command == "sweep") return cmd_sweep(cfg, out);
    if (o.command == "bump") return cmd_bump(cfg, out);
    if (o.command == "cutoff") return cmd_cutoff(cfg, out);
    if (o.command == "strauss") return cmd_strauss(cfg, out);
    if (o.command == "gn") return cmd_gn(cfg, out);
    err << "error: unknown command '" << o.command << "'\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

} // namespace fraclab::cli
