// Empirical decomposition of the quality gap between selection regimes.
//
// All quantities condition on published trials only. The headline identity,
//   mean_mu_O - mean_mu_D == darwinian_learning - statistical_learning,
// is pure arithmetic on the empirical conditional means, so every report
// carries its residual and the tests pin it near machine precision.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "posthoc/theory.hpp"

namespace posthoc {

// Mergeable sufficient statistics for one (regime, theory type) cell.
// Sums cover published trials only; n_trials counts all episodes routed
// to the cell so publication rates stay recoverable.
struct CellStats {
  std::int64_t n_trials = 0;
  std::int64_t n_published = 0;
  double sum_mu = 0.0;
  double sum_mu_sq = 0.0;
  double sum_mu_hat = 0.0;
  double sum_mu_hat_sq = 0.0;

  void add(const TrialRecord& record);
  void merge(const CellStats& other);
  double mean_mu() const;          // throws InsufficientDataError when empty
  double mean_mu_hat() const;      // throws InsufficientDataError when empty
  double sample_var_mu() const;    // 0 when n_published < 2
  double se_mean_mu() const;       // 0 when n_published < 2
};

// Per-thread accumulator over trial records; merge is associative and the
// runner merges blocks in index order, so totals are independent of the
// worker count.
struct TrialAccumulator {
  std::array<std::array<CellStats, 2>, 2> cells{};  // [regime][type]
  std::int64_t n_pairs = 0;

  CellStats& cell(Regime regime, TheoryType type);
  const CellStats& cell(Regime regime, TheoryType type) const;
  void add(const TrialRecord& record);
  void add_pair(const PairedTrial& pair);
  void merge(const TrialAccumulator& other);
};

struct ConditionalCell {
  Regime regime = Regime::a_priori;
  TheoryType theory_type = TheoryType::bad;
  std::int64_t n_trials = 0;
  std::int64_t n_published = 0;
  bool defined = false;   // true iff n_published >= 1
  double mean_mu = 0.0;   // meaningful only when defined
  double mean_mu_hat = 0.0;
  double se_mean_mu = 0.0;
};

struct StandardErrors {
  double p_good_given_O = 0.0;
  double p_good_given_D = 0.0;
  double mean_mu_O = 0.0;
  double mean_mu_D = 0.0;
  double darwinian_learning = 0.0;
  double statistical_learning = 0.0;
  double improvement = 0.0;  // NaN when improvement is undefined
};

// Ratio with a guard: the relative improvement is meaningless when the
// a-priori mean is not positive, so the raw difference travels with it.
struct ImprovementValue {
  bool defined = false;
  double ratio = 0.0;           // mean_mu_D / mean_mu_O - 1 when defined
  double raw_difference = 0.0;  // mean_mu_D - mean_mu_O, always meaningful
};

struct DecompositionReport {
  std::array<ConditionalCell, 4> cells{};  // (O,G), (O,B), (D,G), (D,B)
  std::int64_t n_published_O = 0;
  std::int64_t n_published_D = 0;
  double p_good_given_O = 0.0;
  double p_good_given_D = 0.0;
  double mean_mu_O = 0.0;
  double mean_mu_D = 0.0;
  double darwinian_learning = 0.0;
  double statistical_learning = 0.0;
  double identity_residual = 0.0;
  ImprovementValue improvement;
  StandardErrors standard_errors;

  // True when only one theory type occurs in the data (type mixture is
  // degenerate); darwinian_learning is fixed at 0 in that case.
  bool single_type = false;
  TheoryType represented_type = TheoryType::bad;

  const ConditionalCell& cell(Regime regime, TheoryType type) const;
};

// Builds the report from accumulated sufficient statistics.
// Errors: no trials at all; a present theory type with zero published
// trials in some regime ("insufficient published trials in cell ...").
DecompositionReport estimate_report(const TrialAccumulator& acc);

// Convenience overload over raw record batches.
DecompositionReport estimate_report(std::span<const TrialRecord> trials_O,
                                    std::span<const TrialRecord> trials_D);

// Recomputes (mean_mu_O - mean_mu_D) - (DL - SL) from the report fields.
// Throws PreconditionError when a cell the identity depends on is undefined.
double check_identity(const DecompositionReport& report);

ImprovementValue improvement_ratio(const DecompositionReport& report);

}  // namespace posthoc
