// JSON configuration parsing, canonical serialization, and content digests.
//
// One schema covers plain runs and sweeps; the optional "sweep" block turns
// a model config into a sweep config. Parsing is strict: unknown keys are
// errors, and every diagnostic names the key, the expected form, and the
// received value. Serialization is canonical (sorted keys, defaults
// resolved), so the FNV-1a digest is stable under reordering of the input
// document.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "posthoc/oracle.hpp"
#include "posthoc/sweep.hpp"

namespace posthoc {

struct ParsedConfig {
  SweepConfig config;  // axis == none means a plain single-model run
  bool is_sweep = false;
  std::vector<std::string> defaults_applied;  // echoed into the run manifest
};

ParsedConfig parse_config(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

// Canonical JSON text of a resolved config (sorted keys, trials and seed
// included, sweep block present only when an axis is set).
std::string serialize_config(const SweepConfig& config);

struct ParsedOracleConfig {
  bool random_mu = false;
  DiscreteModelConfig fixed;     // used when !random_mu
  RandomMuDiscreteConfig random;  // used when random_mu
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  std::vector<std::string> defaults_applied;
};

ParsedOracleConfig parse_oracle_config(const std::string& text);
ParsedOracleConfig parse_oracle_config_file(const std::string& path);
std::string serialize_oracle_config(const ParsedOracleConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::uint64_t digest);

// Hex FNV-1a 64 digest of the canonical serialization.
std::string config_digest(const SweepConfig& config);
std::string oracle_config_digest(const ParsedOracleConfig& config);

}  // namespace posthoc
