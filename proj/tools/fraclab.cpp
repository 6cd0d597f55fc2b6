#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace fraclab::cli;
  CLI::App app{"Weighted fractional Schrödinger ground states: exponents, solvers, experiments"};
  app.require_subcommand(1, 1);

  CliOptions o;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("--config", config, "key = value configuration file (default: built-in config/default.conf)");
  app.add_option("--out", out, "output directory (default: $FRACLAB_OUT, else output.dir)");
  app.add_option("--seed", seed, "seed for the solver and the survey family");
  app.add_option("--threads", threads, "worker cap; 1 is the reproducible mode")->check(CLI::PositiveNumber);
  app.add_flag("--strict", o.strict, "exit 2 when an admissibility check fails");

  const std::map<std::string, std::string> help = {
      {"exponents", "derived exponents and admissibility table"},
      {"solve-radial", "radial level m(R) on the ball of radius R"},
      {"solve-full", "radial and unrestricted levels m(R), M(R) with nonradiality"},
      {"solve-rn", "whole-space radial level m(inf)"},
      {"sweep", "m(R) and M(R) over sweep.R_list"},
      {"bump", "quotient of a translated bump against its upper bound"},
      {"cutoff", "cut-off error of a radial profile over cutoff.R_list"},
      {"strauss", "weighted Strauss ratio over the survey family"},
      {"gn", "Gagliardo-Nirenberg ratio and dilation drift over the survey family"}};
  for (const auto& name : command_names()) app.add_subcommand(name, help.count(name) ? help.at(name) : "")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (app.count("--config")) o.config_path = config;
  if (app.count("--out")) o.out_dir = out;
  if (app.count("--seed")) o.seed = seed;
  if (app.count("--threads")) o.threads = threads;
  return run(o, std::cout, std::cerr);
}
