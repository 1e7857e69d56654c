#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "posthoc/errors.hpp"
#include "posthoc/model.hpp"

using namespace posthoc;

TEST_CASE("normal distribution reports its moments") {
  const ScalarDistribution d = ScalarDistribution::make_normal(1.5, 2.0);
  CHECK(d.kind() == ScalarDistribution::Kind::normal);
  CHECK(d.mean() == doctest::Approx(1.5));
  CHECK(d.variance() == doctest::Approx(4.0));
  CHECK(d.sd() == doctest::Approx(2.0));
  CHECK_FALSE(d.is_point_mass_at(1.5));
}

TEST_CASE("point mass is recognized") {
  const ScalarDistribution d = ScalarDistribution::make_normal(0.25, 0.0);
  CHECK(d.is_point_mass_at(0.25));
  CHECK_FALSE(d.is_point_mass_at(0.0));
  const ScalarDistribution pt = ScalarDistribution::make_discrete({{3.0, 1.0}});
  CHECK(pt.is_point_mass_at(3.0));
}

TEST_CASE("discrete distribution moments") {
  const ScalarDistribution d =
      ScalarDistribution::make_discrete({{-1.0, 0.5}, {1.0, 0.5}});
  CHECK(d.mean() == doctest::Approx(0.0));
  CHECK(d.variance() == doctest::Approx(1.0));
  CHECK(d.sd() == doctest::Approx(1.0));
}

TEST_CASE("invalid distributions are rejected with the field name") {
  ScalarDistribution bad_sd = ScalarDistribution::make_normal(0.0, -1.0);
  CHECK_THROWS_WITH_AS(bad_sd.validate("mu_dist"),
                       doctest::Contains("mu_dist"), ConfigError);

  ScalarDistribution bad_probs =
      ScalarDistribution::make_discrete({{0.0, 0.3}, {1.0, 0.3}});
  CHECK_THROWS_AS(bad_probs.validate("eps_dist"), ConfigError);

  ScalarDistribution nonpositive =
      ScalarDistribution::make_discrete({{0.0, 0.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(nonpositive.validate("eps_dist"), ConfigError);
}

TEST_CASE("scaled transforms both kinds") {
  const ScalarDistribution n = ScalarDistribution::make_normal(1.0, 2.0).scaled(3.0);
  CHECK(n.mean() == doctest::Approx(3.0));
  CHECK(n.sd() == doctest::Approx(6.0));

  const ScalarDistribution d =
      ScalarDistribution::make_discrete({{-1.0, 0.5}, {1.0, 0.5}}).scaled(2.0);
  CHECK(d.points()[0].value == doctest::Approx(-2.0));
  CHECK(d.points()[1].value == doctest::Approx(2.0));
}

TEST_CASE("sampling matches the law's moments") {
  RngStream rng(42, 100);
  const ScalarDistribution d =
      ScalarDistribution::make_discrete({{-2.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}});
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = d.sample(rng);
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.02);             // true mean 0
  CHECK(std::abs(sum_sq / n - 2.0) < 0.05);    // true variance 2
}

TEST_CASE("universe draw is pure in (config, seed)") {
  UniverseConfig config;
  config.n_ideas = 20;
  const IdeaUniverse a = sample_universe(config, {42, 9});
  const IdeaUniverse b = sample_universe(config, {42, 9});
  REQUIRE(a.size() == 20);
  CHECK(a.mu == b.mu);
  CHECK(a.mu_hat == b.mu_hat);
  const IdeaUniverse c = sample_universe(config, {42, 10});
  CHECK(a.mu != c.mu);
}

TEST_CASE("measured quality is true quality plus noise") {
  UniverseConfig config;
  config.n_ideas = 50;
  config.eps_dist = ScalarDistribution::make_normal(0.0, 0.0);  // no noise
  const IdeaUniverse u = sample_universe(config, {1, 2});
  for (int i = 0; i < u.size(); ++i) {
    CHECK(u.mu_hat[i] == doctest::Approx(u.mu[i]));
  }
}

TEST_CASE("fixed-mu sampling pins true qualities and draws only noise") {
  const std::vector<double> mu = {0.0, 0.5, 1.0};
  const ScalarDistribution eps =
      ScalarDistribution::make_discrete({{-1.0, 0.5}, {1.0, 0.5}});
  RngStream rng(42, 11);
  IdeaUniverse u;
  sample_universe_fixed_mu_into(mu, eps, rng, u);
  REQUIRE(u.size() == 3);
  CHECK(u.mu == mu);
  for (int i = 0; i < 3; ++i) {
    const double e = u.mu_hat[i] - u.mu[i];
    CHECK((e == doctest::Approx(-1.0) || e == doctest::Approx(1.0)));
  }
}

TEST_CASE("universe config validation names the offending field") {
  UniverseConfig config;
  config.n_ideas = 0;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("n_ideas"), ConfigError);
}

TEST_CASE("panel model reduces to the t-statistic universe") {
  PanelConfig panel;
  panel.n_obs = 25;
  panel.sigma = 2.0;
  panel.chi_dist = ScalarDistribution::make_normal(0.0, 0.4);
  const UniverseConfig u = panel_to_universe(panel, 10);
  CHECK(u.n_ideas == 10);
  // mu ~ (sqrt(M)/sigma) * chi = 2.5 * chi -> sd 1.0
  CHECK(u.mu_dist.sd() == doctest::Approx(1.0));
  CHECK(u.eps_dist.kind() == ScalarDistribution::Kind::normal);
  CHECK(u.eps_dist.mean() == doctest::Approx(0.0));
  CHECK(u.eps_dist.sd() == doctest::Approx(1.0));
}

TEST_CASE("panel config validation") {
  PanelConfig panel;
  panel.n_obs = 0;
  CHECK_THROWS_AS(panel.validate(), ConfigError);
  panel.n_obs = 10;
  panel.sigma = 0.0;
  CHECK_THROWS_AS(panel.validate(), ConfigError);
}
