#include "posthoc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "posthoc/errors.hpp"

namespace posthoc {

const char* to_string(TheoryType t) {
  return t == TheoryType::good ? "good" : "bad";
}

const char* to_string(Regime r) {
  return r == Regime::a_priori ? "a_priori" : "post_hoc";
}

TheoryPolicy TheoryPolicy::uniform_all(TheoryType label) {
  TheoryPolicy p;
  p.label = label;
  p.rule = Rule::uniform_all;
  return p;
}

TheoryPolicy TheoryPolicy::top_k(TheoryType label, int k) {
  TheoryPolicy p;
  p.label = label;
  p.rule = Rule::top_k;
  p.k = k;
  return p;
}

TheoryPolicy TheoryPolicy::eliminate_worst(TheoryType label, double q) {
  TheoryPolicy p;
  p.label = label;
  p.rule = Rule::eliminate_worst;
  p.q = q;
  return p;
}

void TheoryPolicy::validate(int n_ideas, const std::string& field) const {
  switch (rule) {
    case Rule::uniform_all:
      break;
    case Rule::top_k:
      if (k < 1 || k > n_ideas) {
        throw ConfigError(field + ".k must be in [1, " + std::to_string(n_ideas) +
                          "], got " + std::to_string(k));
      }
      break;
    case Rule::eliminate_worst:
      if (!(q >= 0.0 && q < 1.0)) {
        throw ConfigError(field + ".q must be in [0, 1), got " + std::to_string(q));
      }
      break;
  }
}

int TheoryPolicy::support_size(int n_ideas) const {
  switch (rule) {
    case Rule::uniform_all:
      return n_ideas;
    case Rule::top_k:
      return k;
    case Rule::eliminate_worst:
      return detail::eliminate_worst_retained(q, n_ideas);
  }
  return n_ideas;
}

bool TheoryPolicy::same_rule(const TheoryPolicy& other) const {
  if (rule != other.rule) return false;
  switch (rule) {
    case Rule::uniform_all:
      return true;
    case Rule::top_k:
      return k == other.k;
    case Rule::eliminate_worst:
      return q == other.q;
  }
  return false;
}

void WeightVector::validate() const {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw PreconditionError("weight vector is empty");
  double total = 0.0;
  int positive = 0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw PreconditionError("weights must be finite and nonnegative");
    }
    total += w;
    if (w > 0.0) ++positive;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw PreconditionError("weights must sum to 1, got " + std::to_string(total));
  }
  if (static_cast<int>(support.size()) != positive) {
    throw PreconditionError("support does not match the positive-weight indices");
  }
  std::int32_t prev = -1;
  for (std::int32_t idx : support) {
    if (idx <= prev || idx >= n) {
      throw PreconditionError("support must be ascending indices into the weights");
    }
    if (!(weights[static_cast<std::size_t>(idx)] > 0.0)) {
      throw PreconditionError("support index " + std::to_string(idx) + " has zero weight");
    }
    prev = idx;
  }
}

void ModelConfig::validate() const {
  universe.validate();
  if (!(prob_good >= 0.0 && prob_good <= 1.0)) {
    throw ConfigError("prob_good must be in [0, 1], got " + std::to_string(prob_good));
  }
  if (std::isnan(hurdle)) throw ConfigError("hurdle must not be NaN");
  good_policy.validate(universe.n_ideas, "good_policy");
  bad_policy.validate(universe.n_ideas, "bad_policy");
}

bool ModelConfig::falsifiability_warning() const {
  return good_policy.rule == TheoryPolicy::Rule::uniform_all &&
         bad_policy.rule == TheoryPolicy::Rule::uniform_all;
}

namespace detail {

int eliminate_worst_retained(double q, int n) {
  // ceil((1-q)*n) in exact arithmetic; the 1e-9 slack absorbs the double
  // rounding of decimal q (0.98 stored as 0.98000...018 must still give 2
  // for n=100, not 3).
  const double exact = (1.0 - q) * static_cast<double>(n);
  int r = static_cast<int>(std::ceil(exact - 1e-9));
  if (r < 1) r = 1;
  if (r > n) r = n;
  return r;
}

void retained_by_true_quality(std::span<const double> mu, int r,
                              std::vector<std::int32_t>& out,
                              std::vector<std::int32_t>& scratch) {
  const int n = static_cast<int>(mu.size());
  if (r < 1 || r > n) throw PreconditionError("retained count out of range");
  out.resize(static_cast<std::size_t>(r));
  if (r == n) {
    std::iota(out.begin(), out.end(), 0);
    return;
  }
  scratch.resize(static_cast<std::size_t>(n));
  std::iota(scratch.begin(), scratch.end(), 0);
  const auto better = [&mu](std::int32_t a, std::int32_t b) {
    const double ma = mu[static_cast<std::size_t>(a)];
    const double mb = mu[static_cast<std::size_t>(b)];
    if (ma != mb) return ma > mb;
    return a < b;  // ties toward the lower index
  };
  std::nth_element(scratch.begin(), scratch.begin() + (r - 1), scratch.end(), better);
  std::copy(scratch.begin(), scratch.begin() + r, out.begin());
  std::sort(out.begin(), out.end());
}

std::int32_t argmax_measured(std::span<const double> mu_hat,
                             std::span<const std::int32_t> support) {
  if (support.empty()) throw PreconditionError("selection over an empty support");
  std::int32_t best = support[0];
  double best_val = mu_hat[static_cast<std::size_t>(best)];
  for (std::size_t j = 1; j < support.size(); ++j) {
    const std::int32_t idx = support[j];
    const double v = mu_hat[static_cast<std::size_t>(idx)];
    // strict > keeps the lowest index on ties (support is ascending)
    if (v > best_val) {
      best = idx;
      best_val = v;
    }
  }
  return best;
}

std::int32_t categorical_uniform(std::span<const std::int32_t> support, RngStream& rng) {
  if (support.empty()) throw PreconditionError("selection over an empty support");
  const double w = 1.0 / static_cast<double>(support.size());
  const double u = rng.uniform01();
  double cum = 0.0;
  for (std::int32_t idx : support) {
    cum += w;
    if (u < cum) return idx;
  }
  return support.back();
}

void fill_support(const TheoryPolicy& policy, std::span<const double> mu,
                  std::vector<std::int32_t>& out, std::vector<std::int32_t>& scratch) {
  const int n = static_cast<int>(mu.size());
  switch (policy.rule) {
    case TheoryPolicy::Rule::uniform_all:
      out.resize(static_cast<std::size_t>(n));
      std::iota(out.begin(), out.end(), 0);
      return;
    case TheoryPolicy::Rule::top_k:
      retained_by_true_quality(mu, policy.k, out, scratch);
      return;
    case TheoryPolicy::Rule::eliminate_worst:
      retained_by_true_quality(mu, eliminate_worst_retained(policy.q, n), out, scratch);
      return;
  }
}

}  // namespace detail

WeightVector build_weights(const TheoryPolicy& policy, const IdeaUniverse& universe) {
  if (universe.size() == 0) throw PreconditionError("universe has no ideas");
  policy.validate(universe.size(), "policy");
  WeightVector out;
  std::vector<std::int32_t> scratch;
  detail::fill_support(policy, universe.mu, out.support, scratch);
  out.weights.assign(static_cast<std::size_t>(universe.size()), 0.0);
  const double w = 1.0 / static_cast<double>(out.support.size());
  for (std::int32_t idx : out.support) out.weights[static_cast<std::size_t>(idx)] = w;
  return out;
}

std::int32_t select_a_priori(const WeightVector& weights, RngStream& rng) {
  if (weights.support.empty()) throw PreconditionError("selection over an empty support");
  const double u = rng.uniform01();
  double cum = 0.0;
  for (std::int32_t idx : weights.support) {
    cum += weights.weights[static_cast<std::size_t>(idx)];
    if (u < cum) return idx;
  }
  return weights.support.back();
}

std::int32_t select_a_priori(const WeightVector& weights, RngSeed seed) {
  RngStream rng(seed);
  return select_a_priori(weights, rng);
}

std::int32_t select_post_hoc(const WeightVector& weights, const IdeaUniverse& universe) {
  if (static_cast<int>(weights.weights.size()) != universe.size()) {
    throw PreconditionError("weight vector and universe sizes differ");
  }
  return detail::argmax_measured(universe.mu_hat, weights.support);
}

std::int32_t limited_attention(std::span<const std::int32_t> candidates,
                               const IdeaUniverse& universe) {
  if (candidates.empty()) throw PreconditionError("limited attention over no candidates");
  for (std::int32_t idx : candidates) {
    if (idx < 0 || idx >= universe.size()) {
      throw PreconditionError("candidate index " + std::to_string(idx) + " out of range");
    }
  }
  return detail::argmax_measured(universe.mu_hat, candidates);
}

PairedTrial run_paired_trial(const ModelConfig& config, std::int64_t trial_index,
                             RngSeed seed, TrialWorkspace& ws) {
  const std::uint64_t ctx = seed.stream_index;
  const std::uint64_t trial = static_cast<std::uint64_t>(trial_index);

  RngStream type_rng(seed.master_seed,
                     derive_stream(ctx, trial, StreamPurpose::theory_type));
  const bool good = type_rng.bernoulli(config.prob_good);
  const TheoryPolicy& policy = good ? config.good_policy : config.bad_policy;

  RngStream universe_rng(seed.master_seed,
                         derive_stream(ctx, trial, StreamPurpose::universe));
  sample_universe_into(config.universe, universe_rng, ws.universe);

  std::vector<std::int32_t>& support = good ? ws.good_support : ws.bad_support;
  detail::fill_support(policy, ws.universe.mu, support, ws.scratch);

  RngStream selection_rng(seed.master_seed,
                          derive_stream(ctx, trial, StreamPurpose::selection));
  const std::int32_t pick_o = detail::categorical_uniform(support, selection_rng);
  const std::int32_t pick_d = detail::argmax_measured(ws.universe.mu_hat, support);

  const auto record = [&](Regime regime, std::int32_t pick) {
    TrialRecord r;
    r.trial_index = trial_index;
    r.regime = regime;
    r.theory_type = good ? TheoryType::good : TheoryType::bad;
    r.selected = pick;
    r.mu_star = ws.universe.mu[static_cast<std::size_t>(pick)];
    r.mu_hat_star = ws.universe.mu_hat[static_cast<std::size_t>(pick)];
    r.published = r.mu_hat_star > config.hurdle;  // strict
    return r;
  };

  PairedTrial out;
  out.a_priori = record(Regime::a_priori, pick_o);
  out.post_hoc = record(Regime::post_hoc, pick_d);
  return out;
}

TrialRecord run_trial(const ModelConfig& config, Regime regime, std::int64_t trial_index,
                      RngSeed seed) {
  TrialWorkspace ws;
  const PairedTrial pair = run_paired_trial(config, trial_index, seed, ws);
  return regime == Regime::a_priori ? pair.a_priori : pair.post_hoc;
}

}  // namespace posthoc
