#pragma once

// Experiment configuration: JSON schema with strict key checking.

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hylab/kernel.hpp"
#include "hylab/spec_io.hpp"

namespace hylab {

inline constexpr const char* kVersion = "0.1.0";

/// Validation failure carrying the offending key path, e.g. "scanner.epsilon".
struct ConfigError : std::runtime_error {
  ConfigError(std::string key, const std::string& msg) : std::runtime_error(key + ": " + msg), key_path(std::move(key)) {}
  std::string key_path;
};

struct KernelConfig {
  double support = SmoothingKernel::kDefaultSupport;
  double quad_tolerance = 1e-10;
  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct EngineConfig {
  double truncation = 100.0;
  double sigma = 0.9;
  double tau_start = 0.0;
  double tau_step = 0.1;
  std::uint64_t count = 100;
  int grid_resolution = 21;
  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct ScannerConfig {
  double horizon = 50.0;
  double tau_step = 0.01;
  double epsilon = 0.1;
  double truncation = 100.0;
  std::string target;  // path to a target JSON file
  friend bool operator==(const ScannerConfig&, const ScannerConfig&) = default;
};

struct StatsConfig {
  double horizon = 2000.0;
  std::uint64_t samples = 2000;
  double dt = 0.05;
  double sigma = 0.9;
  double truncation = 1000.0;
  double s0_re = 0.9;
  double s0_im = 0.0;
  double delta = 0.5;
  int levels = 6;
  int resolution = 7;
  std::vector<std::uint64_t> primes{2};
  friend bool operator==(const StatsConfig&, const StatsConfig&) = default;
};

struct ExperimentConfig {
  std::vector<std::string> specs{"zeta"};
  KernelConfig kernel;
  EngineConfig engine;
  ScannerConfig scanner;
  StatsConfig stats;
  std::string output;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  /// Checks every numeric field against the preconditions of the module that consumes it.
  void validate() const {
    if (specs.empty()) throw ConfigError("specs", "at least one spec reference is required");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      try {
        (void)resolve_spec(specs[i]);
      } catch (const std::exception& e) {
        throw ConfigError("specs[" + std::to_string(i) + "]", e.what());
      }
    }
    if (!(kernel.support > 1.0)) throw ConfigError("kernel.support", "support bound C must be > 1");
    if (!(kernel.quad_tolerance > 0.0)) throw ConfigError("kernel.quad_tolerance", "must be positive");
    if (!(engine.truncation >= 2.0)) throw ConfigError("engine.X", "truncation X must be >= 2");
    if (!(engine.tau_step > 0.0)) throw ConfigError("engine.tau_step", "must be positive");
    if (engine.count == 0) throw ConfigError("engine.count", "must be positive");
    if (engine.grid_resolution < 1) throw ConfigError("engine.grid_resolution", "must be positive");
    if (!(scanner.horizon > 0.0)) throw ConfigError("scanner.T", "must be positive");
    if (!(scanner.tau_step > 0.0)) throw ConfigError("scanner.tau_step", "must be positive");
    if (!(scanner.epsilon > 0.0 && scanner.epsilon < 0.5)) {
      throw ConfigError("scanner.epsilon", "must satisfy 0 < epsilon < 1/2 (phase windows degenerate otherwise)");
    }
    if (!(scanner.truncation >= 2.0)) throw ConfigError("scanner.X", "truncation X must be >= 2");
    if (!(stats.horizon > 0.0)) throw ConfigError("stats.T", "must be positive");
    if (stats.samples == 0) throw ConfigError("stats.M", "must be positive");
    if (!(stats.dt > 0.0 && stats.dt <= 1.0)) throw ConfigError("stats.dt", "must lie in (0, 1]");
    if (!(stats.sigma > 0.5)) throw ConfigError("stats.sigma", "must exceed sigma_phi = 1/2");
    if (!(stats.truncation >= 2.0)) throw ConfigError("stats.X", "truncation X must be >= 2");
    if (!(stats.delta > 0.0)) throw ConfigError("stats.delta", "must be positive");
    if (stats.levels < 1) throw ConfigError("stats.levels", "must be >= 1");
    if (stats.resolution < 1) throw ConfigError("stats.resolution", "must be >= 1");
    for (std::size_t i = 0; i < stats.primes.size(); ++i) {
      if (!is_prime(stats.primes[i])) throw ConfigError("stats.primes[" + std::to_string(i) + "]", "not a prime");
    }
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
  }
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.empty() ? key : path + "." + key, std::string("wrong type: ") + e.what());
  }
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {
      {"specs", c.specs},
      {"kernel", {{"support", c.kernel.support}, {"quad_tolerance", c.kernel.quad_tolerance}}},
      {"engine",
       {{"X", c.engine.truncation},
        {"sigma", c.engine.sigma},
        {"tau_start", c.engine.tau_start},
        {"tau_step", c.engine.tau_step},
        {"count", c.engine.count},
        {"grid_resolution", c.engine.grid_resolution}}},
      {"scanner",
       {{"T", c.scanner.horizon},
        {"tau_step", c.scanner.tau_step},
        {"epsilon", c.scanner.epsilon},
        {"X", c.scanner.truncation},
        {"target", c.scanner.target}}},
      {"stats",
       {{"T", c.stats.horizon},
        {"M", c.stats.samples},
        {"dt", c.stats.dt},
        {"sigma", c.stats.sigma},
        {"X", c.stats.truncation},
        {"s0", {c.stats.s0_re, c.stats.s0_im}},
        {"delta", c.stats.delta},
        {"levels", c.stats.levels},
        {"resolution", c.stats.resolution},
        {"primes", c.stats.primes}}},
      {"output", c.output},
      {"seed", c.seed},
      {"threads", c.threads},
  };
}

/// Parses and validates; unknown keys anywhere are errors.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::read;
  ExperimentConfig c;
  detail::reject_unknown(j, {"specs", "kernel", "engine", "scanner", "stats", "output", "seed", "threads"}, "");
  read(j, "specs", c.specs, "");
  read(j, "output", c.output, "");
  read(j, "seed", c.seed, "");
  read(j, "threads", c.threads, "");
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    detail::reject_unknown(k, {"support", "quad_tolerance"}, "kernel");
    read(k, "support", c.kernel.support, "kernel");
    read(k, "quad_tolerance", c.kernel.quad_tolerance, "kernel");
  }
  if (j.contains("engine")) {
    const auto& e = j.at("engine");
    detail::reject_unknown(e, {"X", "sigma", "tau_start", "tau_step", "count", "grid_resolution"}, "engine");
    read(e, "X", c.engine.truncation, "engine");
    read(e, "sigma", c.engine.sigma, "engine");
    read(e, "tau_start", c.engine.tau_start, "engine");
    read(e, "tau_step", c.engine.tau_step, "engine");
    read(e, "count", c.engine.count, "engine");
    read(e, "grid_resolution", c.engine.grid_resolution, "engine");
  }
  if (j.contains("scanner")) {
    const auto& s = j.at("scanner");
    detail::reject_unknown(s, {"T", "tau_step", "epsilon", "X", "target"}, "scanner");
    read(s, "T", c.scanner.horizon, "scanner");
    read(s, "tau_step", c.scanner.tau_step, "scanner");
    read(s, "epsilon", c.scanner.epsilon, "scanner");
    read(s, "X", c.scanner.truncation, "scanner");
    read(s, "target", c.scanner.target, "scanner");
  }
  if (j.contains("stats")) {
    const auto& s = j.at("stats");
    detail::reject_unknown(s, {"T", "M", "dt", "sigma", "X", "s0", "delta", "levels", "resolution", "primes"}, "stats");
    read(s, "T", c.stats.horizon, "stats");
    read(s, "M", c.stats.samples, "stats");
    read(s, "dt", c.stats.dt, "stats");
    read(s, "sigma", c.stats.sigma, "stats");
    read(s, "X", c.stats.truncation, "stats");
    if (s.contains("s0")) {
      std::vector<double> s0;
      read(s, "s0", s0, "stats");
      if (s0.size() != 2) throw ConfigError("stats.s0", "expected [re, im]");
      c.stats.s0_re = s0[0];
      c.stats.s0_im = s0[1];
    }
    read(s, "delta", c.stats.delta, "stats");
    read(s, "levels", c.stats.levels, "stats");
    read(s, "resolution", c.stats.resolution, "stats");
    read(s, "primes", c.stats.primes, "stats");
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

/// FNV-1a over the canonical JSON dump, leaving out worker count and output
/// path since neither changes any result.
inline std::string config_hash(const ExperimentConfig& c) {
  auto j = to_json(c);
  j.erase("threads");
  j.erase("output");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace hylab
