// Theory types, selection rules, and the single research episode.
//
// A theory type is an a-priori weight policy over ideas: bad types weight
// all ideas equally; good types concentrate weight on the ideas with the
// highest true quality (top-k, or everything but the worst share q).
// A trial draws a type, draws a universe, and selects an idea either
// a priori (categorical draw from the policy weights, no data seen) or
// post hoc (argmax of measured quality restricted to the policy support).
// The selected idea is published when its measured quality clears the
// hurdle: mu_hat > h, strict.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "posthoc/model.hpp"
#include "posthoc/rng.hpp"

namespace posthoc {

enum class TheoryType { good, bad };
enum class Regime { a_priori, post_hoc };

const char* to_string(TheoryType t);
const char* to_string(Regime r);

struct TheoryPolicy {
  enum class Rule { uniform_all, top_k, eliminate_worst };

  TheoryType label = TheoryType::bad;
  Rule rule = Rule::uniform_all;
  int k = 0;       // top_k only
  double q = 0.0;  // eliminate_worst only

  static TheoryPolicy uniform_all(TheoryType label);
  static TheoryPolicy top_k(TheoryType label, int k);
  static TheoryPolicy eliminate_worst(TheoryType label, double q);

  // Throws ConfigError if the rule cannot be applied to n_ideas ideas.
  void validate(int n_ideas, const std::string& field) const;

  // Number of ideas with positive weight.
  int support_size(int n_ideas) const;

  bool same_rule(const TheoryPolicy& other) const;
};

struct WeightVector {
  std::vector<double> weights;        // length N, nonnegative, sums to 1
  std::vector<std::int32_t> support;  // ascending indices with weight > 0

  void validate() const;
};

struct ModelConfig {
  UniverseConfig universe;
  double prob_good = 0.5;
  TheoryPolicy good_policy = TheoryPolicy::uniform_all(TheoryType::good);
  TheoryPolicy bad_policy = TheoryPolicy::uniform_all(TheoryType::bad);
  double hurdle = 2.0;

  void validate() const;
  // True when no theory type rules anything out (union of supports is all
  // ideas via two uniform_all policies): the model is not falsifiable.
  bool falsifiability_warning() const;
};

struct TrialRecord {
  std::int64_t trial_index = 0;
  Regime regime = Regime::a_priori;
  TheoryType theory_type = TheoryType::bad;
  std::int32_t selected = 0;
  double mu_star = 0.0;
  double mu_hat_star = 0.0;
  bool published = false;
};

// --- operations ------------------------------------------------------------

// The a-priori recommendation distribution of a policy on a universe.
// uniform_all: 1/N everywhere. top_k(k): 1/k on the k ideas with largest
// TRUE quality. eliminate_worst(q): uniform on the ceil((1-q)N) best by
// true quality. Ties broken toward the lower index.
WeightVector build_weights(const TheoryPolicy& policy, const IdeaUniverse& universe);

// Categorical draw from the weights; deterministic given the seed.
std::int32_t select_a_priori(const WeightVector& weights, RngSeed seed);
std::int32_t select_a_priori(const WeightVector& weights, RngStream& rng);

// Argmax of measured quality restricted to the support; lowest-index ties.
std::int32_t select_post_hoc(const WeightVector& weights, const IdeaUniverse& universe);

// Argmax of measured quality over an explicit candidate set (the limited-
// attention filter). Identical to select_post_hoc with uniform weights on
// the candidates.
std::int32_t limited_attention(std::span<const std::int32_t> candidates,
                               const IdeaUniverse& universe);

// --- research episodes ------------------------------------------------------

// Reusable buffers for the trial loop; one per worker thread.
struct TrialWorkspace {
  IdeaUniverse universe;
  std::vector<std::int32_t> scratch;
  std::vector<std::int32_t> good_support;
  std::vector<std::int32_t> bad_support;
};

struct PairedTrial {
  TrialRecord a_priori;
  TrialRecord post_hoc;
};

// One research episode under BOTH regimes with a shared type draw and
// universe draw (paired comparison). Sub-streams are derived from
// (seed.stream_index, trial_index, purpose), so the pairing is exact and
// trials parallelize freely under one master seed.
PairedTrial run_paired_trial(const ModelConfig& config, std::int64_t trial_index,
                             RngSeed seed, TrialWorkspace& ws);

// Single-regime view of the same episode.
TrialRecord run_trial(const ModelConfig& config, Regime regime, std::int64_t trial_index,
                      RngSeed seed);

namespace detail {

// Ascending indices of the r largest values; ties toward the lower index.
void retained_by_true_quality(std::span<const double> mu, int r,
                              std::vector<std::int32_t>& out,
                              std::vector<std::int32_t>& scratch);

// Retained count for eliminate_worst(q) over n ideas: ceil((1-q)*n), with a
// tolerance so that decimal q values hit the intended integer (e.g. q=0.98,
// n=100 -> 2).
int eliminate_worst_retained(double q, int n);

std::int32_t argmax_measured(std::span<const double> mu_hat,
                             std::span<const std::int32_t> support);

// Uniform categorical over `support` via the same cumulative walk used for
// general weights, so engine and public paths draw identically.
std::int32_t categorical_uniform(std::span<const std::int32_t> support, RngStream& rng);

// Support of a policy given the true qualities, as ascending indices.
void fill_support(const TheoryPolicy& policy, std::span<const double> mu,
                  std::vector<std::int32_t>& out, std::vector<std::int32_t>& scratch);

}  // namespace detail

}  // namespace posthoc
