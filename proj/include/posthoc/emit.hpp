// Result serialization: CSV rows with a pinned column contract, nested JSON
// documents, and the run manifest written next to every emitted file.
//
// All writes are atomic (temp file + rename) and every number is printed in
// shortest round-trip form, so re-running a deterministic job yields
// byte-identical files.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posthoc/decomposition.hpp"
#include "posthoc/oracle.hpp"
#include "posthoc/sweep.hpp"

namespace posthoc {

struct RunManifest {
  std::string command;        // how this run was invoked
  std::string config_digest;  // hex of the canonical resolved config
  std::uint64_t master_seed = 0;
  std::string engine_version;
  std::vector<std::string> outputs;  // files this run wrote (manifest excluded)
  std::vector<std::string> defaults_applied;
  std::vector<std::string> warnings;
  std::string timestamp;  // ISO-8601 UTC; the only non-deterministic field
};

// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite.
std::string format_double(double value);

std::string iso8601_utc_now();

// Write-temp-then-rename; throws IoError naming the path on failure.
void write_text_file_atomic(const std::string& path, const std::string& content);

std::string manifest_to_json(const RunManifest& manifest);

// The pinned CSV header shared by sweep and single-run emission.
extern const char* const kSweepCsvHeader;

// One row per grid point, failure entries included with a reason.
std::string sweep_to_csv(const SweepResult& result);

// A single report as a one-row CSV under the same header; grid_value empty.
std::string report_to_csv(const DecompositionReport& report, double sd_mu,
                          double sd_mu_hat);
std::string failed_report_to_csv(const std::string& reason, double sd_mu,
                                 double sd_mu_hat);

std::string sweep_to_json(const SweepResult& result,
                          std::optional<double> crossing = std::nullopt);
std::string report_to_json(const DecompositionReport& report);
std::string exact_report_to_json(const ExactReport& report);

// Oracle run document: the exact report plus (optionally) the Monte Carlo
// comparison made on the same instance.
std::string oracle_to_json(const ExactReport& exact, const std::vector<ZScore>* zscores,
                           const DecompositionReport* mc_report);

std::string scatter_to_csv(const ScatterData& data);
std::string scatter_to_json(const ScatterData& data);

std::string histogram_to_json(const HistogramData& data);

std::string zscores_to_csv(const std::vector<ZScore>& scores);
std::string zscores_to_json(const std::vector<ZScore>& scores);

}  // namespace posthoc
