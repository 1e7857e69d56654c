// Self-check suite: every module invariant that can be verified at runtime,
// packaged for the `validate` command. Quick mode trims Monte Carlo sizes to
// a few seconds; full mode runs the publication-scale counts.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posthoc/rng.hpp"
#include "posthoc/theory.hpp"

namespace posthoc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured values, bounds, or the failure text
};

struct ValidationOutcome {
  std::vector<CheckResult> checks;

  int n_failed() const;
  bool all_passed() const { return n_failed() == 0; }
  std::string text() const;  // one "[PASS]/[FAIL] name: detail" line per check
};

ValidationOutcome run_validation(bool quick, std::uint64_t seed, int workers);

// A random valid model configuration (both theory types present, hurdle low
// enough that published cells fill up at 10^4 trials). Shared by the
// validation suite and the identity stress tests.
ModelConfig random_model_config(RngStream& rng);

}  // namespace posthoc
