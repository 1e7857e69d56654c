// Deterministic blocked trial execution.
//
// Trials are independent given the seed scheme, so they are split into
// fixed-size blocks. Workers claim blocks through an atomic cursor and
// write each block's accumulator into a slot indexed by block number; the
// final merge walks the slots in order. Totals are therefore identical for
// any worker count, including 1.

#pragma once

#include <cstdint>

#include "posthoc/decomposition.hpp"
#include "posthoc/rng.hpp"
#include "posthoc/theory.hpp"

namespace posthoc {

inline constexpr std::int64_t kTrialBlockSize = 8192;

// Runs n_trials paired trials of the model under master seed / stream
// context taken from `seed`, on up to `workers` threads.
TrialAccumulator run_trials_blocked(const ModelConfig& config, std::int64_t n_trials,
                                    RngSeed seed, int workers);

}  // namespace posthoc
