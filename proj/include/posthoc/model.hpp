// Generative model core: idea universes and the panel-data mapping.
//
// A universe is one draw of N true qualities mu[i] and their measured
// counterparts mu_hat[i] = mu[i] + eps[i]. A panel-data configuration
// (M observations per idea, effect law chi, noise sd sigma) is never
// simulated directly; it is reduced to the universe it implies when the
// measured quality is read as a t-statistic: mu ~ (sqrt(M)/sigma) * chi,
// eps ~ Normal(0, 1).

#pragma once

#include <cstdint>
#include <vector>

#include "posthoc/distribution.hpp"
#include "posthoc/rng.hpp"

namespace posthoc {

struct UniverseConfig {
  int n_ideas = 1;
  ScalarDistribution mu_dist = ScalarDistribution::make_normal(0.0, 1.0);
  ScalarDistribution eps_dist = ScalarDistribution::make_normal(0.0, 1.0);

  void validate() const;  // throws ConfigError naming the offending field
};

struct IdeaUniverse {
  std::vector<double> mu;
  std::vector<double> mu_hat;

  int size() const { return static_cast<int>(mu.size()); }
};

struct PanelConfig {
  int n_obs = 1;  // observations per idea
  ScalarDistribution chi_dist = ScalarDistribution::make_normal(0.0, 1.0);
  double sigma = 1.0;  // per-observation noise sd

  void validate() const;
};

// N i.i.d. draws of mu plus independent measurement noise. Pure in
// (config, seed): equal inputs give bit-identical universes.
IdeaUniverse sample_universe(const UniverseConfig& config, RngSeed seed);

// Allocation-free variant for hot loops; resizes `out` as needed.
void sample_universe_into(const UniverseConfig& config, RngStream& rng, IdeaUniverse& out);

// Same, but with mu pinned to a fixed vector (exact-oracle bridge); only the
// measurement noise is drawn.
void sample_universe_fixed_mu_into(const std::vector<double>& mu_values,
                                   const ScalarDistribution& eps_dist, RngStream& rng,
                                   IdeaUniverse& out);

// The universe implied by a panel-data model read as t-statistics.
UniverseConfig panel_to_universe(const PanelConfig& panel, int n_ideas);

}  // namespace posthoc
