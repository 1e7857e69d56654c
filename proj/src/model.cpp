#include "posthoc/model.hpp"

#include <cmath>

#include "posthoc/errors.hpp"

namespace posthoc {

void UniverseConfig::validate() const {
  if (n_ideas < 1)
    throw ConfigError("n_ideas: must be >= 1, got " + std::to_string(n_ideas));
  mu_dist.validate("mu_dist");
  eps_dist.validate("eps_dist");
}

void PanelConfig::validate() const {
  if (n_obs < 1)
    throw ConfigError("n_obs: must be >= 1, got " + std::to_string(n_obs));
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError("sigma: must be > 0, got " + std::to_string(sigma));
  chi_dist.validate("chi_dist");
}

void sample_universe_into(const UniverseConfig& config, RngStream& rng, IdeaUniverse& out) {
  const std::size_t n = static_cast<std::size_t>(config.n_ideas);
  out.mu.resize(n);
  out.mu_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mu[i] = config.mu_dist.sample(rng);
  for (std::size_t i = 0; i < n; ++i)
    out.mu_hat[i] = out.mu[i] + config.eps_dist.sample(rng);
}

void sample_universe_fixed_mu_into(const std::vector<double>& mu_values,
                                   const ScalarDistribution& eps_dist, RngStream& rng,
                                   IdeaUniverse& out) {
  const std::size_t n = mu_values.size();
  out.mu.assign(mu_values.begin(), mu_values.end());
  out.mu_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.mu_hat[i] = mu_values[i] + eps_dist.sample(rng);
}

IdeaUniverse sample_universe(const UniverseConfig& config, RngSeed seed) {
  config.validate();
  RngStream rng(seed);
  IdeaUniverse out;
  sample_universe_into(config, rng, out);
  return out;
}

UniverseConfig panel_to_universe(const PanelConfig& panel, int n_ideas) {
  panel.validate();
  const double factor = std::sqrt(static_cast<double>(panel.n_obs)) / panel.sigma;
  UniverseConfig out;
  out.n_ideas = n_ideas;
  out.mu_dist = panel.chi_dist.scaled(factor);
  // The idea-level t-stat noise is standard normal once the CLT kicks in.
  out.eps_dist = ScalarDistribution::make_normal(0.0, 1.0);
  out.validate();
  return out;
}

}  // namespace posthoc
