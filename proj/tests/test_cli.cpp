#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace fraclab::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cmd(const CliOptions& o) {
  std::ostringstream out, err;
  const int code = run(o, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
public:
  explicit TempDir(const std::string& tag) : path_(fs::temp_directory_path() / ("fraclab_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }

private:
  fs::path path_;
};

const std::string kProblem = "n = 2\ns = 0.75\np = 3\nq = 2\na = 0.5\nb = 1\n";

std::map<std::string, std::string> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) {
      std::ifstream is(e.path(), std::ios::binary);
      std::ostringstream ss;
      ss << is.rdbuf();
      out[e.path().filename().string()] = ss.str();
    }
  return out;
}

// The stem carries a timestamp; compare contents by suffix after it.
std::map<std::string, std::string> by_suffix(const std::map<std::string, std::string>& files) {
  std::map<std::string, std::string> out;
  for (const auto& [name, body] : files) {
    const auto us = name.find('_');
    const auto tail = name.find_first_of("_.", us + 1);
    out[name.substr(tail)] = body;
  }
  return out;
}

} // namespace

TEST(Cli, ExponentsOnTheReferenceConfig) {
  TempDir d("exp");
  CliOptions o;
  o.command = "exponents";
  o.out_dir = d.path().string();
  const auto r = run_cmd(o);
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("admissible=yes"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("eta=0.25"), std::string::npos) << r.out;
}

TEST(Cli, StrictTurnsFailedChecksIntoAnExitCode) {
  TempDir d("strict");
  CliOptions o;
  o.command = "exponents";
  o.config_path = d.write("low_s.conf", "n = 2\ns = 0.4\np = 3\nq = 2\na = 0.5\nb = 1\n");
  const auto lax = run_cmd(o);
  EXPECT_EQ(lax.code, kOk) << lax.err;
  EXPECT_NE(lax.out.find("admissible=no"), std::string::npos) << lax.out;
  o.strict = true;
  EXPECT_EQ(run_cmd(o).code, kStrict);
  o.command = "solve-full";
  const auto solve = run_cmd(o);
  EXPECT_EQ(solve.code, kStrict);
  EXPECT_NE(solve.err.find("--strict"), std::string::npos);
}

TEST(Cli, ConfigErrorsAreUsageErrors) {
  TempDir d("bad");
  CliOptions o;
  o.command = "exponents";
  o.config_path = d.write("missing.conf", "n = 2\np = 3\nq = 2\na = 0.5\nb = 1\n");
  auto r = run_cmd(o);
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("missing key 's'"), std::string::npos) << r.err;
  o.config_path = d.write("unknown.conf", kProblem + "speed = 3\n");
  r = run_cmd(o);
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("unknown key 'speed'"), std::string::npos) << r.err;
  o.config_path = (d.path() / "absent.conf").string();
  EXPECT_EQ(run_cmd(o).code, kUsage);
  o.config_path.reset();
  o.command = "frobnicate";
  EXPECT_EQ(run_cmd(o).code, kUsage);
}

TEST(Cli, SameConfigAndSeedGiveIdenticalCsv) {
  TempDir d("repro");
  const auto conf = d.write("small.conf", kProblem + "R = 2\nsolver.trace = true\n");
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* sub : {"a", "b"}) {
    CliOptions o;
    o.command = "solve-full";
    o.config_path = conf;
    o.seed = 99;
    o.threads = 1;
    o.out_dir = (d.path() / sub).string();
    const auto r = run_cmd(o);
    ASSERT_EQ(r.code, kOk) << r.err;
    runs.push_back(by_suffix(files_with_extension(d.path() / sub, ".csv")));
    EXPECT_EQ(files_with_extension(d.path() / sub, ".json").size(), 1u);
  }
  ASSERT_FALSE(runs[0].empty());
  EXPECT_EQ(runs[0], runs[1]);
}

TEST(Cli, CutoffOfACompactProfileIsExact) {
  TempDir d("cutoff");
  CliOptions o;
  o.command = "cutoff";
  o.config_path = d.write("bump.conf", kProblem + "cutoff.profile = bump\ncutoff.width = 1\ncutoff.R_list = 2,4\n");
  o.out_dir = d.path().string();
  const auto r = run_cmd(o);
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("error(R=4)=0 "), std::string::npos) << r.out;
  EXPECT_EQ(files_with_extension(d.path(), ".dat").size(), 1u);
}

TEST(Cli, OutputDirectoryPrecedence) {
  TempDir d("outdir");
  const auto env_dir = d.path() / "env", flag_dir = d.path() / "flag", conf_dir = d.path() / "conf";
  const auto conf = d.write("o.conf", kProblem + "output.dir = " + conf_dir.string() + "\ncutoff.R_list = 1\n");
  CliOptions o;
  o.command = "cutoff";
  o.config_path = conf;
  ::unsetenv("FRACLAB_OUT");
  ASSERT_EQ(run_cmd(o).code, kOk);
  EXPECT_TRUE(fs::exists(conf_dir));
  ::setenv("FRACLAB_OUT", env_dir.c_str(), 1);
  ASSERT_EQ(run_cmd(o).code, kOk);
  EXPECT_TRUE(fs::exists(env_dir));
  o.out_dir = flag_dir.string();
  ASSERT_EQ(run_cmd(o).code, kOk);
  ::unsetenv("FRACLAB_OUT");
  EXPECT_EQ(files_with_extension(flag_dir, ".json").size(), 1u);
  EXPECT_EQ(files_with_extension(env_dir, ".json").size(), 1u);
  EXPECT_EQ(files_with_extension(conf_dir, ".json").size(), 1u);
}

TEST(Cli, CommandListIsComplete) {
  const auto& names = command_names();
  for (const char* c : {"exponents", "solve-radial", "solve-full", "solve-rn", "sweep", "bump", "cutoff", "strauss", "gn"})
    EXPECT_NE(std::find(names.begin(), names.end(), c), names.end()) << c;
}
