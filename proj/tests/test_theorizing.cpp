#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "posthoc/errors.hpp"
#include "posthoc/theory.hpp"

using namespace posthoc;

namespace {

IdeaUniverse toy_universe() {
  // mu:      3  1  4  1  5  (ties at 1)
  // mu_hat:  2  7  1  8  8  (tie at 8)
  IdeaUniverse u;
  u.mu = {3, 1, 4, 1, 5};
  u.mu_hat = {2, 7, 1, 8, 8};
  return u;
}

}  // namespace

TEST_CASE("uniform_all weights everything equally") {
  const IdeaUniverse u = toy_universe();
  const WeightVector w =
      build_weights(TheoryPolicy::uniform_all(TheoryType::bad), u);
  REQUIRE(w.weights.size() == 5u);
  for (double x : w.weights) CHECK(x == doctest::Approx(0.2));
  CHECK(w.support == std::vector<std::int32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("top_k concentrates on the largest true qualities") {
  const IdeaUniverse u = toy_universe();
  const WeightVector w = build_weights(TheoryPolicy::top_k(TheoryType::good, 2), u);
  CHECK(w.support == std::vector<std::int32_t>{2, 4});  // mu 4 and 5
  CHECK(w.weights[2] == doctest::Approx(0.5));
  CHECK(w.weights[4] == doctest::Approx(0.5));
  CHECK(w.weights[0] == 0.0);
}

TEST_CASE("top_k breaks true-quality ties toward the lower index") {
  IdeaUniverse u;
  u.mu = {1, 2, 2, 0};
  u.mu_hat = u.mu;
  const WeightVector w = build_weights(TheoryPolicy::top_k(TheoryType::good, 3), u);
  CHECK(w.support == std::vector<std::int32_t>{0, 1, 2});  // index 0 beats index 3
}

TEST_CASE("eliminate_worst retains ceil((1-q)N) ideas") {
  const IdeaUniverse u = toy_universe();
  const WeightVector w =
      build_weights(TheoryPolicy::eliminate_worst(TheoryType::good, 0.5), u);
  // ceil(0.5 * 5) = 3 survivors: mu 5, 4, 3.
  CHECK(w.support == std::vector<std::int32_t>{0, 2, 4});

  CHECK(detail::eliminate_worst_retained(0.98, 100) == 2);
  CHECK(detail::eliminate_worst_retained(0.75, 100) == 25);
  CHECK(detail::eliminate_worst_retained(0.0, 100) == 100);
  CHECK(detail::eliminate_worst_retained(0.5, 7) == 4);
  CHECK(detail::eliminate_worst_retained(0.999, 10) == 1);  // never empty
}

TEST_CASE("policy validation rejects impossible rules") {
  CHECK_THROWS_WITH_AS(TheoryPolicy::top_k(TheoryType::good, 2).validate(1, "good_policy"),
                       doctest::Contains("good_policy"), ConfigError);
  CHECK_THROWS_AS(TheoryPolicy::top_k(TheoryType::good, 0).validate(5, "good_policy"),
                  ConfigError);
  CHECK_THROWS_AS(
      TheoryPolicy::eliminate_worst(TheoryType::good, 1.0).validate(5, "good_policy"),
      ConfigError);
  CHECK_THROWS_AS(
      TheoryPolicy::eliminate_worst(TheoryType::good, -0.1).validate(5, "good_policy"),
      ConfigError);
  CHECK_NOTHROW(TheoryPolicy::eliminate_worst(TheoryType::good, 0.0).validate(5, "g"));
}

TEST_CASE("post-hoc selection is the measured argmax with lowest-index ties") {
  const IdeaUniverse u = toy_universe();
  const WeightVector all =
      build_weights(TheoryPolicy::uniform_all(TheoryType::bad), u);
  CHECK(select_post_hoc(all, u) == 3);  // mu_hat 8 at indices 3 and 4 -> 3

  const WeightVector top2 = build_weights(TheoryPolicy::top_k(TheoryType::good, 2), u);
  CHECK(select_post_hoc(top2, u) == 4);  // restricted to {2,4}: mu_hat 8 at 4
}

TEST_CASE("a-priori selection matches the categorical law") {
  const IdeaUniverse u = toy_universe();
  const WeightVector top2 = build_weights(TheoryPolicy::top_k(TheoryType::good, 2), u);
  std::vector<int> counts(5, 0);
  RngStream rng(42, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[select_a_priori(top2, rng)];
  CHECK(counts[0] == 0);
  CHECK(counts[1] == 0);
  CHECK(counts[3] == 0);
  CHECK(std::abs(counts[2] / static_cast<double>(n) - 0.5) < 0.01);
  CHECK(std::abs(counts[4] / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("a-priori selection is pure in the seed") {
  const IdeaUniverse u = toy_universe();
  const WeightVector all = build_weights(TheoryPolicy::uniform_all(TheoryType::bad), u);
  const std::int32_t first = select_a_priori(all, RngSeed{9, 1});
  CHECK(select_a_priori(all, RngSeed{9, 1}) == first);
}

TEST_CASE("limited attention equals post-hoc selection with uniform weights") {
  UniverseConfig config;
  config.n_ideas = 17;
  std::vector<std::int32_t> all(17);
  for (int i = 0; i < 17; ++i) all[i] = i;
  WeightVector w;
  w.weights.assign(17, 1.0 / 17.0);
  w.support = all;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const IdeaUniverse u = sample_universe(config, {42, s});
    CHECK(limited_attention(all, u) == select_post_hoc(w, u));
  }
}

TEST_CASE("weight vector validation") {
  WeightVector w;
  w.weights = {0.5, 0.5, 0.0};
  w.support = {0, 1};
  CHECK_NOTHROW(w.validate());
  w.weights = {0.5, 0.4, 0.0};  // does not sum to 1
  CHECK_THROWS_AS(w.validate(), PreconditionError);
  w.weights = {0.5, 0.5, 0.0};
  w.support = {1, 0};  // not ascending
  CHECK_THROWS_AS(w.validate(), PreconditionError);
}

TEST_CASE("publication requires strictly clearing the hurdle") {
  ModelConfig config;
  config.universe.n_ideas = 3;
  // All ideas identical: mu = 1 surely, eps = 0 surely, so mu_hat = 1.
  config.universe.mu_dist = ScalarDistribution::make_discrete({{1.0, 1.0}});
  config.universe.eps_dist = ScalarDistribution::make_discrete({{0.0, 1.0}});
  config.prob_good = 0.0;
  config.hurdle = 1.0;  // mu_hat == h exactly -> not published
  TrialWorkspace ws;
  for (int t = 0; t < 20; ++t) {
    const PairedTrial pt = run_paired_trial(config, t, {42, 0}, ws);
    CHECK_FALSE(pt.a_priori.published);
    CHECK_FALSE(pt.post_hoc.published);
  }
  config.hurdle = 0.999999;  // strictly below -> published
  const PairedTrial pt = run_paired_trial(config, 0, {42, 0}, ws);
  CHECK(pt.a_priori.published);
  CHECK(pt.post_hoc.published);
}

TEST_CASE("paired trials share the type and universe draw across regimes") {
  ModelConfig config;
  config.universe.n_ideas = 12;
  config.prob_good = 0.5;
  config.good_policy = TheoryPolicy::top_k(TheoryType::good, 3);
  config.hurdle = -std::numeric_limits<double>::infinity();
  TrialWorkspace ws;
  for (int t = 0; t < 500; ++t) {
    const PairedTrial pt = run_paired_trial(config, t, {42, 0}, ws);
    CHECK(pt.a_priori.theory_type == pt.post_hoc.theory_type);
    CHECK(pt.a_priori.trial_index == pt.post_hoc.trial_index);
    CHECK(pt.a_priori.regime == Regime::a_priori);
    CHECK(pt.post_hoc.regime == Regime::post_hoc);
    // Under a shared universe the post-hoc pick cannot measure lower than
    // the a-priori pick on the same support.
    CHECK(pt.post_hoc.mu_hat_star >= pt.a_priori.mu_hat_star);
    // With hurdle at -infinity everything is published.
    CHECK(pt.a_priori.published);
    CHECK(pt.post_hoc.published);
  }
}

TEST_CASE("run_trial reproduces the matching half of run_paired_trial") {
  ModelConfig config;
  config.universe.n_ideas = 8;
  config.good_policy = TheoryPolicy::top_k(TheoryType::good, 2);
  TrialWorkspace ws;
  for (int t = 0; t < 100; ++t) {
    const PairedTrial pt = run_paired_trial(config, t, {42, 0}, ws);
    const TrialRecord o = run_trial(config, Regime::a_priori, t, {42, 0});
    const TrialRecord d = run_trial(config, Regime::post_hoc, t, {42, 0});
    CHECK(o.selected == pt.a_priori.selected);
    CHECK(o.mu_star == pt.a_priori.mu_star);
    CHECK(d.selected == pt.post_hoc.selected);
    CHECK(d.mu_hat_star == pt.post_hoc.mu_hat_star);
  }
}

TEST_CASE("model config validation and the falsifiability warning") {
  ModelConfig config;
  config.universe.n_ideas = 5;
  config.prob_good = 1.5;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("prob_good"), ConfigError);
  config.prob_good = 0.5;
  CHECK_NOTHROW(config.validate());
  CHECK(config.falsifiability_warning());  // both policies uniform_all
  config.good_policy = TheoryPolicy::top_k(TheoryType::good, 2);
  CHECK_FALSE(config.falsifiability_warning());
}
