#include <gtest/gtest.h>

#include <sstream>

#include "fraclab/config.hpp"
#include "fraclab/default_conf.hpp"
#include "fraclab/io.hpp"

using namespace fraclab;

namespace {

ConfigEntries defaults() { return parse_config_text(std::string(kDefaultConfigText)); }

ConfigEntries problem_only() {
  return parse_config_text("n = 2\ns = 0.75\np = 3\nq = 2\na = 0.5\nb = 1\n");
}

} // namespace

TEST(ConfigText, ParsesKeysCommentsAndBlankLines) {
  const auto e = parse_config_text("# header\n\n  R = 8   # trailing\nsweep.R_list = 1, 2 ,4\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e.at("R"), "8");
  EXPECT_EQ(e.at("sweep.R_list"), "1, 2 ,4");
}

TEST(ConfigText, RejectsMalformedLines) {
  EXPECT_THROW(parse_config_text("R = 1\nR = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_config_text(" = 3\n"), ConfigError);
}

TEST(ConfigText, DefaultsParseAndLoad) {
  const auto d = defaults();
  const auto cfg = load_config(d, d);
  EXPECT_EQ(cfg.params.n, 2);
  EXPECT_DOUBLE_EQ(cfg.params.s, 0.75);
  EXPECT_DOUBLE_EQ(cfg.params.a, 0.5);
  EXPECT_TRUE(cfg.grid.fixed_h);
  EXPECT_DOUBLE_EQ(cfg.grid.h, 0.25);
  EXPECT_EQ(cfg.sweep_R, (std::vector<double>{1, 2, 4, 8, 16, 24}));
  EXPECT_EQ(cfg.entries, d);
}

TEST(LoadConfig, UserSubsetOverridesDefaults) {
  auto user = problem_only();
  user["R"] = "4";
  user["solver.direction"] = "gradient";
  const auto cfg = load_config(defaults(), user);
  EXPECT_DOUBLE_EQ(cfg.R, 4.0);
  EXPECT_EQ(cfg.solver.direction, Direction::gradient);
  EXPECT_EQ(cfg.entries.size(), defaults().size());
}

TEST(LoadConfig, UnknownAndMissingKeysAreNamed) {
  auto user = problem_only();
  user["solver.tolerance"] = "1e-6";
  try {
    load_config(defaults(), user);
    FAIL() << "accepted an unknown key";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown key 'solver.tolerance'"), std::string::npos);
  }
  user = problem_only();
  user.erase("s");
  try {
    load_config(defaults(), user);
    FAIL() << "accepted a missing key";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("missing key 's'"), std::string::npos);
  }
}

TEST(LoadConfig, ValuesAreValidated) {
  for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{{"R", "-1"},
                                                                           {"R", "abc"},
                                                                           {"grid.policy", "adaptive"},
                                                                           {"solver.direction", "newton"},
                                                                           {"solver.trace", "maybe"},
                                                                           {"cutoff.profile", "cauchy"},
                                                                           {"sweep.R_list", ""},
                                                                           {"n", "2.5"}}) {
    auto user = problem_only();
    user[k] = v;
    EXPECT_THROW(load_config(defaults(), user), ConfigError) << k << " = " << v;
  }
}

TEST(Manifest, ConfigRoundTripIsExact) {
  auto user = problem_only();
  user["s"] = "0.6";
  user["sweep.R_list"] = "1,3";
  const auto cfg = load_config(defaults(), user);
  const auto j = make_manifest("sweep", "20260101T000000Z", cfg);
  EXPECT_EQ(entries_from_manifest(j), cfg.entries);
  const auto reparsed = nlohmann::ordered_json::parse(j.dump(2));
  EXPECT_EQ(entries_from_manifest(reparsed), cfg.entries);
  EXPECT_EQ(load_config(defaults(), entries_from_manifest(reparsed)).entries, cfg.entries);
  EXPECT_DOUBLE_EQ(reparsed["params"]["s"].get<double>(), 0.6);
  EXPECT_EQ(reparsed["experiment"], "sweep");
}

TEST(Manifest, RejectsMissingOrNonStringConfig) {
  EXPECT_THROW(entries_from_manifest(nlohmann::ordered_json::object()), ConfigError);
  nlohmann::ordered_json j;
  j["config"] = {{"R", 3}};
  EXPECT_THROW(entries_from_manifest(j), ConfigError);
}
