#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/version.hpp>
#include <fftw3.h>
#include <json.hpp>

#include "fraclab/config.hpp"
#include "fraclab/errors.hpp"

namespace fraclab {

inline constexpr const char* kVersion = "0.1.0";

/// Compact UTC timestamp, e.g. 20261016T101500Z.
inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

/// Writes <experiment>_<timestamp>.{csv,json} and <experiment>_<timestamp>_<curve>.dat into a directory.
class OutputSink {
public:
  OutputSink(std::filesystem::path dir, const std::string& experiment, const std::string& timestamp = utc_timestamp())
      : dir_(std::move(dir)), timestamp_(timestamp) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (!std::filesystem::is_directory(dir_)) throw ConfigError("cannot create output directory " + dir_.string());
    stem_ = experiment + "_" + timestamp_;
    // Two runs within one second get a numeric suffix instead of overwriting each other.
    for (int k = 1; std::filesystem::exists(dir_ / (stem_ + ".json")); ++k)
      stem_ = experiment + "_" + timestamp_ + "-" + std::to_string(k);
  }

  const std::string& stem() const { return stem_; }
  const std::string& timestamp() const { return timestamp_; }
  const std::vector<std::filesystem::path>& written() const { return written_; }

  std::filesystem::path write_csv(const std::string& content, const std::string& suffix = "") {
    return write(stem_ + (suffix.empty() ? "" : "_" + suffix) + ".csv", content);
  }

  /// Two-column gnuplot data with a comment header naming the axes.
  std::filesystem::path write_dat(const std::string& curve, const std::string& xlabel, const std::string& ylabel,
                                  const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("write_dat: column length mismatch");
    std::ostringstream os;
    os.precision(12);
    os << "# " << xlabel << ' ' << ylabel << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) os << x[i] << ' ' << y[i] << '\n';
    return write(stem_ + "_" + curve + ".dat", os.str());
  }

  std::filesystem::path write_manifest(const nlohmann::ordered_json& j) { return write(stem_ + ".json", j.dump(2) + "\n"); }

  std::filesystem::path write_text(const std::string& name, const std::string& content) {
    return write(stem_ + "_" + name, content);
  }

private:
  std::filesystem::path write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << content;
    written_.push_back(path);
    return path;
  }

  std::filesystem::path dir_;
  std::string timestamp_;
  std::string stem_;
  std::vector<std::filesystem::path> written_;
};

inline nlohmann::ordered_json versions_json() {
  nlohmann::ordered_json v;
  v["fraclab"] = kVersion;
  v["boost"] = BOOST_LIB_VERSION;
  v["fftw"] = std::string(fftw_version);
#if defined(__VERSION__)
  v["compiler"] = __VERSION__;
#endif
  return v;
}

/// Run manifest: experiment, timestamp, versions, parameters, grid, seeds, full configuration.
inline nlohmann::ordered_json make_manifest(const std::string& experiment, const std::string& timestamp, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["timestamp"] = timestamp;
  j["versions"] = versions_json();
  j["params"] = {{"n", cfg.params.n}, {"s", cfg.params.s}, {"p", cfg.params.p},
                 {"q", cfg.params.q}, {"a", cfg.params.a}, {"b", cfg.params.b}};
  j["grid"] = {{"policy", cfg.grid.fixed_h ? "fixed_h" : "fixed_N"}, {"h", cfg.grid.h}, {"N", cfg.grid.N}};
  j["seeds"] = {{"solver", cfg.solver.seed}, {"family", cfg.family.seed}};
  j["threads"] = cfg.solver.threads;
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.entries) c[k] = v;
  j["config"] = c;
  return j;
}

/// Recovers the configuration entries stored in a manifest.
inline ConfigEntries entries_from_manifest(const nlohmann::ordered_json& j) {
  if (!j.contains("config") || !j["config"].is_object()) throw ConfigError("manifest has no config object");
  ConfigEntries out;
  for (const auto& [k, v] : j["config"].items()) {
    if (!v.is_string()) throw ConfigError("manifest config value for '" + k + "' is not a string");
    out[k] = v.get<std::string>();
  }
  return out;
}

} // namespace fraclab
