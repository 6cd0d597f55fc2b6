#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fraclab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kStrict = 2, kNotConverged = 3 };

struct CliOptions {
  std::string command;
  std::optional<std::string> config_path;  ///< defaults to the compiled-in default configuration
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool strict = false;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand; returns the process exit code. Errors are reported on `err`.
int run(const CliOptions& opts, std::ostream& out, std::ostream& err);

} // namespace fraclab::cli
