// Exact ground truth for small discrete instances.
//
// With fixed true qualities and a discrete noise law, every (theory type,
// noise vector, selection) path can be enumerated and weighted by its exact
// probability. The a-priori branch needs no enumeration at all: the
// recommendation distribution dotted with per-idea publication probabilities
// gives the exact conditional means. The resulting report is the reference
// the Monte Carlo pipeline is validated against.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posthoc/decomposition.hpp"
#include "posthoc/distribution.hpp"
#include "posthoc/rng.hpp"
#include "posthoc/theory.hpp"

namespace posthoc {

// Hard cap on enumerated noise vectors (|eps_points|^n_ideas).
inline constexpr double kOracleBudget = 1e7;

struct DiscreteModelConfig {
  std::vector<double> mu_values;          // fixed true qualities
  std::vector<DiscretePoint> eps_points;  // shared iid noise law
  double prob_good = 0.0;
  TheoryPolicy good_policy = TheoryPolicy::uniform_all(TheoryType::good);
  TheoryPolicy bad_policy = TheoryPolicy::uniform_all(TheoryType::bad);
  double hurdle = 2.0;

  int n_ideas() const { return static_cast<int>(mu_values.size()); }
  // Throws ConfigError for malformed fields, BudgetError when
  // |eps_points|^n_ideas exceeds the enumeration budget.
  void validate() const;
};

// Same config with the true qualities drawn iid from a discrete law; the
// oracle enumerates the mu assignments as an outer product, so the combined
// budget (|mu_points|*|eps_points|)^n_ideas applies.
struct RandomMuDiscreteConfig {
  int n_ideas = 0;
  std::vector<DiscretePoint> mu_points;
  std::vector<DiscretePoint> eps_points;
  double prob_good = 0.0;
  TheoryPolicy good_policy = TheoryPolicy::uniform_all(TheoryType::good);
  TheoryPolicy bad_policy = TheoryPolicy::uniform_all(TheoryType::bad);
  double hurdle = 2.0;

  void validate() const;
};

struct ExactCell {
  Regime regime = Regime::a_priori;
  TheoryType theory_type = TheoryType::bad;
  double prob_published = 0.0;  // joint mass of (type, published) in the regime
  bool defined = false;         // prob_published > 0
  double mean_mu = 0.0;
  double mean_mu_hat = 0.0;
};

struct ExactReport {
  std::array<ExactCell, 4> cells{};  // (O,G), (O,B), (D,G), (D,B)
  double p_good_given_O = 0.0;
  double p_good_given_D = 0.0;
  double mean_mu_O = 0.0;
  double mean_mu_D = 0.0;
  double darwinian_learning = 0.0;
  double statistical_learning = 0.0;
  double identity_residual = 0.0;
  ImprovementValue improvement;
  double pub_rate_O = 0.0;  // unconditional publication probability
  double pub_rate_D = 0.0;
  bool single_type = false;
  TheoryType represented_type = TheoryType::bad;

  const ExactCell& cell(Regime regime, TheoryType type) const;
};

// Exact conditional expectations and the learning decomposition by full
// enumeration; deterministic, no randomness involved.
ExactReport enumerate_exact(const DiscreteModelConfig& config);

ExactReport enumerate_exact(const RandomMuDiscreteConfig& config);

double check_identity(const ExactReport& report);

struct ZScore {
  std::string quantity;
  double mc = 0.0;
  double exact = 0.0;
  double se = 0.0;
  double z = 0.0;
};

// Runs the Monte Carlo pipeline on the discrete instance and standardizes
// each reported quantity against the oracle: z = (MC - exact) / SE.
// Requires n_trials >= 10^4 so the normal approximation is honest.
std::vector<ZScore> mc_vs_oracle(const DiscreteModelConfig& config, std::int64_t n_trials,
                                 RngSeed seed);

// The same Monte Carlo run summarized as a report (used by the CLI to show
// MC next to exact numbers).
DecompositionReport mc_report_fixed_mu(const DiscreteModelConfig& config,
                                       std::int64_t n_trials, RngSeed seed);

}  // namespace posthoc
