#include "posthoc/oracle.hpp"

#include <cmath>
#include <limits>

#include "posthoc/errors.hpp"
#include "posthoc/model.hpp"

namespace posthoc {

namespace {

constexpr std::size_t kO = 0;
constexpr std::size_t kD = 1;
constexpr std::size_t kGood = 0;
constexpr std::size_t kBad = 1;

void validate_points(const std::vector<DiscretePoint>& points, const std::string& field) {
  // Reuse the distribution checks (positivity, unit mass, finiteness).
  ScalarDistribution::make_discrete(points).validate(field);
}

void check_budget(double per_idea_states, int n_ideas) {
  const double required = std::pow(per_idea_states, static_cast<double>(n_ideas));
  if (!(required <= kOracleBudget)) {
    throw BudgetError("enumeration budget exceeded: instance requires " +
                          std::to_string(required) + " states, limit " +
                          std::to_string(kOracleBudget),
                      required);
  }
}

// Unconditional weighted sums over published outcomes, mergeable across
// outer enumeration layers.
struct ExactAccum {
  double mass[2][2] = {};
  double sum_mu[2][2] = {};
  double sum_mu_hat[2][2] = {};
};

// Adds one fixed-mu instance, scaled by outer_weight (the probability of
// this mu assignment).
void accumulate_instance(const std::vector<double>& mu,
                         const std::vector<DiscretePoint>& eps, double prob_good,
                         const TheoryPolicy& good_policy, const TheoryPolicy& bad_policy,
                         double hurdle, double outer_weight, ExactAccum& acc) {
  const int n = static_cast<int>(mu.size());
  const double type_weight[2] = {prob_good, 1.0 - prob_good};

  std::vector<std::int32_t> supports[2];
  std::vector<std::int32_t> scratch;
  if (type_weight[kGood] > 0.0) {
    detail::fill_support(good_policy, mu, supports[kGood], scratch);
  }
  if (type_weight[kBad] > 0.0) {
    detail::fill_support(bad_policy, mu, supports[kBad], scratch);
  }

  // A-priori branch, analytic: recommendation weights dotted with the
  // per-idea publication mass.
  for (std::size_t t = 0; t < 2; ++t) {
    if (type_weight[t] <= 0.0) continue;
    const double w = 1.0 / static_cast<double>(supports[t].size());
    for (std::int32_t i : supports[t]) {
      const double mu_i = mu[static_cast<std::size_t>(i)];
      for (const DiscretePoint& pt : eps) {
        const double mu_hat = mu_i + pt.value;
        if (!(mu_hat > hurdle)) continue;
        const double m = outer_weight * type_weight[t] * w * pt.probability;
        acc.mass[kO][t] += m;
        acc.sum_mu[kO][t] += m * mu_i;
        acc.sum_mu_hat[kO][t] += m * mu_hat;
      }
    }
  }

  // Post-hoc branch: every noise vector, exact probability, same argmax
  // code path as the Monte Carlo engine.
  const std::size_t k = eps.size();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(k);

  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  std::vector<double> mu_hat(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) mu_hat[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)] + eps[0].value;

  for (std::uint64_t it = 0; it < total; ++it) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) prob *= eps[digit[static_cast<std::size_t>(i)]].probability;

    for (std::size_t t = 0; t < 2; ++t) {
      if (type_weight[t] <= 0.0) continue;
      const std::int32_t pick = detail::argmax_measured(mu_hat, supports[t]);
      const double picked_hat = mu_hat[static_cast<std::size_t>(pick)];
      if (!(picked_hat > hurdle)) continue;
      const double m = outer_weight * type_weight[t] * prob;
      acc.mass[kD][t] += m;
      acc.sum_mu[kD][t] += m * mu[static_cast<std::size_t>(pick)];
      acc.sum_mu_hat[kD][t] += m * picked_hat;
    }

    // odometer increment
    for (int pos = 0; pos < n; ++pos) {
      std::size_t& d = digit[static_cast<std::size_t>(pos)];
      ++d;
      if (d < k) {
        mu_hat[static_cast<std::size_t>(pos)] = mu[static_cast<std::size_t>(pos)] + eps[d].value;
        break;
      }
      d = 0;
      mu_hat[static_cast<std::size_t>(pos)] = mu[static_cast<std::size_t>(pos)] + eps[0].value;
    }
  }
}

ExactReport assemble_report(const ExactAccum& acc, double prob_good) {
  const bool good_present = prob_good > 0.0;
  const bool bad_present = prob_good < 1.0;

  const auto require_mass = [&acc](std::size_t t, TheoryType type) {
    for (std::size_t r = 0; r < 2; ++r) {
      if (!(acc.mass[r][t] > 0.0)) {
        throw InsufficientDataError(
            std::string("no publication probability in cell (") +
            to_string(r == kO ? Regime::a_priori : Regime::post_hoc) + ", " +
            to_string(type) + ")");
      }
    }
  };
  if (good_present) require_mass(kGood, TheoryType::good);
  if (bad_present) require_mass(kBad, TheoryType::bad);

  ExactReport rep;
  const auto fill = [&acc](ExactCell& out, std::size_t r, std::size_t t) {
    out.regime = r == kO ? Regime::a_priori : Regime::post_hoc;
    out.theory_type = t == kGood ? TheoryType::good : TheoryType::bad;
    out.prob_published = acc.mass[r][t];
    out.defined = acc.mass[r][t] > 0.0;
    if (out.defined) {
      out.mean_mu = acc.sum_mu[r][t] / acc.mass[r][t];
      out.mean_mu_hat = acc.sum_mu_hat[r][t] / acc.mass[r][t];
    } else {
      out.mean_mu = std::numeric_limits<double>::quiet_NaN();
      out.mean_mu_hat = std::numeric_limits<double>::quiet_NaN();
    }
  };
  fill(rep.cells[0], kO, kGood);
  fill(rep.cells[1], kO, kBad);
  fill(rep.cells[2], kD, kGood);
  fill(rep.cells[3], kD, kBad);

  rep.pub_rate_O = acc.mass[kO][kGood] + acc.mass[kO][kBad];
  rep.pub_rate_D = acc.mass[kD][kGood] + acc.mass[kD][kBad];
  rep.p_good_given_O = acc.mass[kO][kGood] / rep.pub_rate_O;
  rep.p_good_given_D = acc.mass[kD][kGood] / rep.pub_rate_D;

  rep.single_type = !(good_present && bad_present);
  if (rep.single_type) {
    rep.represented_type = good_present ? TheoryType::good : TheoryType::bad;
  }

  const auto mixture = [](double p_good, const ExactCell& g, const ExactCell& b) {
    double total = 0.0;
    if (p_good > 0.0) total += p_good * g.mean_mu;
    if (p_good < 1.0) total += (1.0 - p_good) * b.mean_mu;
    return total;
  };
  rep.mean_mu_O = mixture(rep.p_good_given_O, rep.cells[0], rep.cells[1]);
  rep.mean_mu_D = mixture(rep.p_good_given_D, rep.cells[2], rep.cells[3]);

  if (rep.single_type) {
    rep.darwinian_learning = 0.0;
    const std::size_t t = rep.represented_type == TheoryType::good ? kGood : kBad;
    rep.statistical_learning = rep.cells[2 + t].mean_mu - rep.cells[t].mean_mu;
  } else {
    rep.darwinian_learning = (rep.p_good_given_O - rep.p_good_given_D) *
                             (rep.cells[0].mean_mu - rep.cells[1].mean_mu);
    rep.statistical_learning =
        rep.p_good_given_D * (rep.cells[2].mean_mu - rep.cells[0].mean_mu) +
        (1.0 - rep.p_good_given_D) * (rep.cells[3].mean_mu - rep.cells[1].mean_mu);
  }
  rep.identity_residual = (rep.mean_mu_O - rep.mean_mu_D) -
                          (rep.darwinian_learning - rep.statistical_learning);

  rep.improvement.raw_difference = rep.mean_mu_D - rep.mean_mu_O;
  if (rep.mean_mu_O > 0.0) {
    rep.improvement.defined = true;
    rep.improvement.ratio = rep.mean_mu_D / rep.mean_mu_O - 1.0;
  }
  return rep;
}

}  // namespace

void DiscreteModelConfig::validate() const {
  const int n = n_ideas();
  if (n < 1) throw ConfigError("mu_values must contain at least one idea");
  for (double v : mu_values) {
    if (!std::isfinite(v)) throw ConfigError("mu_values must be finite");
  }
  validate_points(eps_points, "eps_points");
  if (!(prob_good >= 0.0 && prob_good <= 1.0)) {
    throw ConfigError("prob_good must be in [0, 1], got " + std::to_string(prob_good));
  }
  if (std::isnan(hurdle)) throw ConfigError("hurdle must not be NaN");
  good_policy.validate(n, "good_policy");
  bad_policy.validate(n, "bad_policy");
  check_budget(static_cast<double>(eps_points.size()), n);
}

void RandomMuDiscreteConfig::validate() const {
  if (n_ideas < 1) throw ConfigError("n_ideas must be at least 1");
  validate_points(mu_points, "mu_points");
  validate_points(eps_points, "eps_points");
  if (!(prob_good >= 0.0 && prob_good <= 1.0)) {
    throw ConfigError("prob_good must be in [0, 1], got " + std::to_string(prob_good));
  }
  if (std::isnan(hurdle)) throw ConfigError("hurdle must not be NaN");
  good_policy.validate(n_ideas, "good_policy");
  bad_policy.validate(n_ideas, "bad_policy");
  check_budget(static_cast<double>(mu_points.size()) *
                   static_cast<double>(eps_points.size()),
               n_ideas);
}

const ExactCell& ExactReport::cell(Regime regime, TheoryType type) const {
  const std::size_t r = regime == Regime::a_priori ? 0 : 1;
  const std::size_t t = type == TheoryType::good ? 0 : 1;
  return cells[r * 2 + t];
}

ExactReport enumerate_exact(const DiscreteModelConfig& config) {
  config.validate();
  ExactAccum acc;
  accumulate_instance(config.mu_values, config.eps_points, config.prob_good,
                      config.good_policy, config.bad_policy, config.hurdle, 1.0, acc);
  return assemble_report(acc, config.prob_good);
}

ExactReport enumerate_exact(const RandomMuDiscreteConfig& config) {
  config.validate();
  const std::size_t k = config.mu_points.size();
  const int n = config.n_ideas;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(k);

  ExactAccum acc;
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  std::vector<double> mu(static_cast<std::size_t>(n), config.mu_points[0].value);
  for (std::uint64_t it = 0; it < total; ++it) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) prob *= config.mu_points[digit[static_cast<std::size_t>(i)]].probability;
    accumulate_instance(mu, config.eps_points, config.prob_good, config.good_policy,
                        config.bad_policy, config.hurdle, prob, acc);
    for (int pos = 0; pos < n; ++pos) {
      std::size_t& d = digit[static_cast<std::size_t>(pos)];
      ++d;
      if (d < k) {
        mu[static_cast<std::size_t>(pos)] = config.mu_points[d].value;
        break;
      }
      d = 0;
      mu[static_cast<std::size_t>(pos)] = config.mu_points[0].value;
    }
  }
  return assemble_report(acc, config.prob_good);
}

double check_identity(const ExactReport& report) {
  const auto need = [&](TheoryType t) {
    if (!report.cell(Regime::a_priori, t).defined ||
        !report.cell(Regime::post_hoc, t).defined) {
      throw PreconditionError(std::string("identity check needs defined cells for the ") +
                              to_string(t) + " type");
    }
  };
  if (report.single_type) {
    need(report.represented_type);
  } else {
    need(TheoryType::good);
    need(TheoryType::bad);
  }
  return (report.mean_mu_O - report.mean_mu_D) -
         (report.darwinian_learning - report.statistical_learning);
}

namespace {

TrialAccumulator run_mc_fixed_mu(const DiscreteModelConfig& config, std::int64_t n_trials,
                                 RngSeed seed) {
  const ScalarDistribution eps_dist = ScalarDistribution::make_discrete(config.eps_points);
  TrialWorkspace ws;
  std::vector<std::int32_t> supports[2];
  std::vector<std::int32_t> scratch;
  if (config.prob_good > 0.0) {
    detail::fill_support(config.good_policy, config.mu_values, supports[kGood], scratch);
  }
  if (config.prob_good < 1.0) {
    detail::fill_support(config.bad_policy, config.mu_values, supports[kBad], scratch);
  }

  TrialAccumulator acc;
  const std::uint64_t ctx = seed.stream_index;
  for (std::int64_t trial = 0; trial < n_trials; ++trial) {
    const std::uint64_t t64 = static_cast<std::uint64_t>(trial);
    RngStream type_rng(seed.master_seed,
                       derive_stream(ctx, t64, StreamPurpose::theory_type));
    const bool good = type_rng.bernoulli(config.prob_good);

    RngStream universe_rng(seed.master_seed,
                           derive_stream(ctx, t64, StreamPurpose::universe));
    sample_universe_fixed_mu_into(config.mu_values, eps_dist, universe_rng, ws.universe);

    const std::vector<std::int32_t>& support = supports[good ? kGood : kBad];
    RngStream selection_rng(seed.master_seed,
                            derive_stream(ctx, t64, StreamPurpose::selection));
    const std::int32_t pick_o = detail::categorical_uniform(support, selection_rng);
    const std::int32_t pick_d = detail::argmax_measured(ws.universe.mu_hat, support);

    const auto record = [&](Regime regime, std::int32_t pick) {
      TrialRecord r;
      r.trial_index = trial;
      r.regime = regime;
      r.theory_type = good ? TheoryType::good : TheoryType::bad;
      r.selected = pick;
      r.mu_star = ws.universe.mu[static_cast<std::size_t>(pick)];
      r.mu_hat_star = ws.universe.mu_hat[static_cast<std::size_t>(pick)];
      r.published = r.mu_hat_star > config.hurdle;
      return r;
    };
    PairedTrial pair;
    pair.a_priori = record(Regime::a_priori, pick_o);
    pair.post_hoc = record(Regime::post_hoc, pick_d);
    acc.add_pair(pair);
  }
  return acc;
}

ZScore make_z(std::string quantity, double mc, double exact, double se) {
  ZScore zs;
  zs.quantity = std::move(quantity);
  zs.mc = mc;
  zs.exact = exact;
  zs.se = se;
  const double diff = mc - exact;
  if (se > 0.0) {
    zs.z = diff / se;
  } else {
    zs.z = std::abs(diff) <= 1e-12
               ? 0.0
               : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return zs;
}

}  // namespace

DecompositionReport mc_report_fixed_mu(const DiscreteModelConfig& config,
                                       std::int64_t n_trials, RngSeed seed) {
  config.validate();
  if (n_trials < 1) throw PreconditionError("n_trials must be positive");
  return estimate_report(run_mc_fixed_mu(config, n_trials, seed));
}

std::vector<ZScore> mc_vs_oracle(const DiscreteModelConfig& config, std::int64_t n_trials,
                                 RngSeed seed) {
  config.validate();
  if (n_trials < 10000) {
    throw PreconditionError("mc_vs_oracle needs n_trials >= 10000, got " +
                            std::to_string(n_trials));
  }
  const ExactReport exact = enumerate_exact(config);
  const TrialAccumulator acc = run_mc_fixed_mu(config, n_trials, seed);
  const DecompositionReport mc = estimate_report(acc);

  const double n = static_cast<double>(acc.n_pairs);
  const auto rate_se = [n](double rate) { return std::sqrt(rate * (1.0 - rate) / n); };
  const double mc_pub_o = static_cast<double>(mc.n_published_O) / n;
  const double mc_pub_d = static_cast<double>(mc.n_published_D) / n;

  std::vector<ZScore> out;
  out.push_back(make_z("pub_rate_O", mc_pub_o, exact.pub_rate_O, rate_se(mc_pub_o)));
  out.push_back(make_z("pub_rate_D", mc_pub_d, exact.pub_rate_D, rate_se(mc_pub_d)));
  out.push_back(make_z("p_good_given_O", mc.p_good_given_O, exact.p_good_given_O,
                       mc.standard_errors.p_good_given_O));
  out.push_back(make_z("p_good_given_D", mc.p_good_given_D, exact.p_good_given_D,
                       mc.standard_errors.p_good_given_D));
  out.push_back(make_z("mean_mu_O", mc.mean_mu_O, exact.mean_mu_O,
                       mc.standard_errors.mean_mu_O));
  out.push_back(make_z("mean_mu_D", mc.mean_mu_D, exact.mean_mu_D,
                       mc.standard_errors.mean_mu_D));
  out.push_back(make_z("darwinian_learning", mc.darwinian_learning,
                       exact.darwinian_learning, mc.standard_errors.darwinian_learning));
  out.push_back(make_z("statistical_learning", mc.statistical_learning,
                       exact.statistical_learning,
                       mc.standard_errors.statistical_learning));
  return out;
}

}  // namespace posthoc
