#include "posthoc/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "posthoc/config_io.hpp"
#include "posthoc/decomposition.hpp"
#include "posthoc/emit.hpp"
#include "posthoc/errors.hpp"
#include "posthoc/oracle.hpp"
#include "posthoc/parallel.hpp"
#include "posthoc/stats.hpp"
#include "posthoc/sweep.hpp"

namespace posthoc {

namespace {

struct Scale {
  int identity_configs;
  std::int64_t identity_trials;
  std::int64_t bias_trials;
  std::int64_t irrelevance_universes;
  std::int64_t contested_trials;  // the two-type histogram model
  std::int64_t homogeneity_trials;
  std::int64_t oracle_mc_trials;
  std::int64_t determinism_trials;
};

constexpr Scale kQuick{10, 10'000, 20'000, 2'000, 100'000, 100'000, 50'000, 20'000};
constexpr Scale kFull{100, 10'000, 100'000, 10'000, 1'000'000, 1'000'000, 200'000,
                      50'000};

std::string fmt(double v) { return format_double(v); }

class Suite {
 public:
  Suite(const Scale& scale, std::uint64_t seed, int workers)
      : scale_(scale), seed_(seed), workers_(workers) {}

  ValidationOutcome run() {
    add("decomposition_identity", [this](std::string& d) { return identity(d); });
    add("total_expectation_consistency",
        [this](std::string& d) { return total_expectation(d); });
    add("selection_bias_positive", [this](std::string& d) { return selection_bias(d); });
    add("posthoc_quality_gain_single_type",
        [this](std::string& d) { return quality_gain(d); });
    add("attention_filter_irrelevance",
        [this](std::string& d) { return irrelevance(d); });
    add("type_sorting_direction", [this](std::string& d) { return type_sorting(d); });
    add("contested_model_quality_direction",
        [this](std::string& d) { return contested_direction(d); });
    add("homogeneous_types_no_selection_effect",
        [this](std::string& d) { return homogeneity(d); });
    add("oracle_hand_instance", [this](std::string& d) { return oracle_hand(d); });
    add("oracle_exact_bias_and_gain",
        [this](std::string& d) { return oracle_lemmas(d); });
    add("oracle_mc_agreement", [this](std::string& d) { return oracle_mc(d); });
    add("crossing_interpolation", [this](std::string& d) { return crossing(d); });
    add("elimination_share_rounding", [this](std::string& d) { return retention(d); });
    add("config_roundtrip_and_digest", [this](std::string& d) { return roundtrip(d); });
    add("rerun_and_worker_determinism",
        [this](std::string& d) { return determinism(d); });
    return std::move(outcome_);
  }

 private:
  template <typename Fn>
  void add(const char* name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    try {
      r.passed = fn(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    outcome_.checks.push_back(std::move(r));
  }

  // -- individual checks ------------------------------------------------

  bool identity(std::string& detail) {
    RngStream gen(seed_, 0xC0FFEE);
    double worst = 0.0;
    for (int i = 0; i < scale_.identity_configs; ++i) {
      const ModelConfig cfg = random_model_config(gen);
      const DecompositionReport rep = run_single(
          cfg, scale_.identity_trials, {seed_, 1000 + static_cast<std::uint64_t>(i)},
          workers_);
      const double scale =
          std::max({1.0, std::abs(rep.mean_mu_O), std::abs(rep.mean_mu_D)});
      worst = std::max(worst, std::abs(check_identity(rep)) / scale);
    }
    detail = "worst relative residual " + fmt(worst) + " over " +
             std::to_string(scale_.identity_configs) + " random configs (bound 1e-10)";
    return worst <= 1e-10;
  }

  bool total_expectation(std::string& detail) {
    RngStream gen(seed_, 0xBEEF);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const ModelConfig cfg = random_model_config(gen);
      const DecompositionReport rep = run_single(
          cfg, scale_.identity_trials, {seed_, 2000 + static_cast<std::uint64_t>(i)},
          workers_);
      const auto mixture_gap = [&rep](Regime regime, double p_good, double mean) {
        const ConditionalCell& g = rep.cell(regime, TheoryType::good);
        const ConditionalCell& b = rep.cell(regime, TheoryType::bad);
        double mix = 0.0;
        if (p_good > 0.0) mix += p_good * g.mean_mu;
        if (p_good < 1.0) mix += (1.0 - p_good) * b.mean_mu;
        return std::abs(mix - mean);
      };
      worst = std::max(worst,
                       mixture_gap(Regime::a_priori, rep.p_good_given_O, rep.mean_mu_O));
      worst = std::max(worst,
                       mixture_gap(Regime::post_hoc, rep.p_good_given_D, rep.mean_mu_D));
    }
    detail = "worst mixture gap " + fmt(worst) + " (bound 1e-10)";
    return worst <= 1e-10;
  }

  bool selection_bias(std::string& detail) {
    // Open model: the selected idea's measurement error is positive on
    // average under post-hoc selection.
    const ModelConfig m = figure_preset("fig1").scatter.model;
    stats::RunningMoments d;
    TrialWorkspace ws;
    for (std::int64_t t = 0; t < scale_.bias_trials; ++t) {
      const PairedTrial pair = run_paired_trial(m, t, {seed_, 3000}, ws);
      d.add(pair.post_hoc.mu_hat_star - pair.post_hoc.mu_star);
    }
    const double lo99 = d.mean() - 2.5758 * d.se_mean();
    detail = "mean measurement error of selected idea " + fmt(d.mean()) +
             ", 99% CI lower bound " + fmt(lo99) + " (must be > 0)";
    return lo99 > 0.0;
  }

  bool quality_gain(std::string& detail) {
    const ModelConfig m = figure_preset("fig1").scatter.model;
    const DecompositionReport rep =
        run_single(m, scale_.bias_trials, {seed_, 3100}, workers_);
    const double gap = rep.mean_mu_D - rep.mean_mu_O;
    const double se = std::hypot(rep.standard_errors.mean_mu_O,
                                 rep.standard_errors.mean_mu_D);
    detail = "mean_mu_D - mean_mu_O = " + fmt(gap) + ", 3*SE = " + fmt(3 * se);
    return gap > 3 * se;
  }

  bool irrelevance(std::string& detail) {
    // Filtering attention to the argmax of measured quality reproduces the
    // post-hoc pick exactly, universe by universe.
    UniverseConfig uc;
    uc.n_ideas = 25;
    uc.mu_dist = ScalarDistribution::make_normal(0.0, 1.0);
    uc.eps_dist = ScalarDistribution::make_normal(0.0, 1.0);
    RngStream rng(seed_, 3200);
    IdeaUniverse u;
    std::vector<std::int32_t> all(25);
    for (int i = 0; i < 25; ++i) all[static_cast<std::size_t>(i)] = i;
    for (std::int64_t t = 0; t < scale_.irrelevance_universes; ++t) {
      sample_universe_into(uc, rng, u);
      const WeightVector w =
          build_weights(TheoryPolicy::uniform_all(TheoryType::bad), u);
      if (select_post_hoc(w, u) != limited_attention(all, u)) {
        detail = "mismatch at universe " + std::to_string(t);
        return false;
      }
    }
    detail = "identical picks on " + std::to_string(scale_.irrelevance_universes) +
             " universes";
    return true;
  }

  const DecompositionReport& contested_report() {
    if (!contested_done_) {
      const ModelConfig m = figure_preset("fig2").histogram.model;
      contested_ = run_single(m, scale_.contested_trials, {seed_, 3300}, workers_);
      contested_done_ = true;
    }
    return contested_;
  }

  bool type_sorting(std::string& detail) {
    const DecompositionReport& rep = contested_report();
    const double gap = rep.p_good_given_O - rep.p_good_given_D;
    const double se = std::hypot(rep.standard_errors.p_good_given_O,
                                 rep.standard_errors.p_good_given_D);
    const bool direction = gap > 3 * se;
    const bool majorities = rep.p_good_given_O > 0.5 && rep.p_good_given_D < 0.5;
    detail = "p_good O " + fmt(rep.p_good_given_O) + ", D " + fmt(rep.p_good_given_D) +
             ", gap 3*SE " + fmt(3 * se);
    return direction && majorities;
  }

  bool contested_direction(std::string& detail) {
    const DecompositionReport& rep = contested_report();
    const double gap = rep.mean_mu_O - rep.mean_mu_D;
    const double se = std::hypot(rep.standard_errors.mean_mu_O,
                                 rep.standard_errors.mean_mu_D);
    detail = "mean_mu_O - mean_mu_D = " + fmt(gap) + ", 3*SE = " + fmt(3 * se);
    return gap > 3 * se;
  }

  bool homogeneity(std::string& detail) {
    const SweepConfig sweep = figure_preset("fig3").sweep;
    const ModelConfig m = sweep_point_model(sweep, 0);  // q = 0: good == bad
    const DecompositionReport rep =
        run_single(m, scale_.homogeneity_trials, {seed_, 3400}, workers_);
    const bool dl_zero = std::abs(rep.darwinian_learning) <=
                         4 * rep.standard_errors.darwinian_learning;
    const bool improvement_nonneg =
        rep.improvement.defined &&
        rep.improvement.ratio >= -4 * rep.standard_errors.improvement;
    detail = "darwinian_learning " + fmt(rep.darwinian_learning) + " (4*SE " +
             fmt(4 * rep.standard_errors.darwinian_learning) + "), improvement " +
             (rep.improvement.defined ? fmt(rep.improvement.ratio) : "undefined");
    return dl_zero && improvement_nonneg;
  }

  static DiscreteModelConfig hand_instance() {
    DiscreteModelConfig c;
    c.mu_values = {0.0, 1.0};
    c.eps_points = {{-1.0, 0.5}, {1.0, 0.5}};
    c.prob_good = 0.0;  // single bad type
    c.bad_policy = TheoryPolicy::uniform_all(TheoryType::bad);
    c.hurdle = -std::numeric_limits<double>::infinity();
    return c;
  }

  bool oracle_hand(std::string& detail) {
    const ExactReport rep = enumerate_exact(hand_instance());
    const bool values_ok =
        std::abs(rep.mean_mu_D - 0.75) <= 1e-12 && std::abs(rep.mean_mu_O - 0.5) <= 1e-12;
    const double scale =
        std::max({1.0, std::abs(rep.mean_mu_O), std::abs(rep.mean_mu_D)});
    const bool identity_ok = std::abs(check_identity(rep)) <= 1e-14 * scale;

    DiscreteModelConfig zero_noise = hand_instance();
    zero_noise.eps_points = {{0.0, 1.0}};
    const ExactReport zn = enumerate_exact(zero_noise);
    const bool zn_ok =
        std::abs(zn.mean_mu_D - 1.0) <= 1e-12 && std::abs(zn.mean_mu_O - 0.5) <= 1e-12;

    detail = "mean_mu_D " + fmt(rep.mean_mu_D) + " (want 0.75), mean_mu_O " +
             fmt(rep.mean_mu_O) + " (want 0.5), residual " +
             fmt(rep.identity_residual);
    return values_ok && identity_ok && zn_ok;
  }

  bool oracle_lemmas(std::string& detail) {
    // Non-degenerate noise, uniform single type: selection inflates the
    // measured quality of the published pick and raises the true quality of
    // the post-hoc pick over the a-priori pick.
    DiscreteModelConfig c;
    c.mu_values = {-0.5, 0.0, 0.25, 0.75};
    c.eps_points = {{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}};
    c.prob_good = 0.0;
    c.hurdle = -std::numeric_limits<double>::infinity();
    const ExactReport rep = enumerate_exact(c);
    const ExactCell& d_cell = rep.cell(Regime::post_hoc, TheoryType::bad);
    const double bias = d_cell.mean_mu_hat - d_cell.mean_mu;
    const double gain = rep.mean_mu_D - rep.mean_mu_O;
    detail = "exact selection bias " + fmt(bias) + ", exact quality gain " + fmt(gain) +
             " (both must be > 0)";
    return bias > 0.0 && gain > 0.0;
  }

  bool oracle_mc(std::string& detail) {
    const std::vector<ZScore> zs =
        mc_vs_oracle(hand_instance(), scale_.oracle_mc_trials, {seed_, 3500});
    double worst = 0.0;
    for (const ZScore& z : zs) {
      if (!std::isfinite(z.z)) {
        detail = "non-finite z for " + z.quantity;
        return false;
      }
      worst = std::max(worst, std::abs(z.z));
    }
    detail = "max |z| " + fmt(worst) + " over " + std::to_string(zs.size()) +
             " quantities (bound 4)";
    return worst <= 4.0;
  }

  bool crossing(std::string& detail) {
    SweepResult res;
    res.config.axis = SweepAxis::heterogeneity_q;
    const double grid[3] = {0.6, 0.7, 0.8};
    const double improv[3] = {-0.2, -0.05, 0.1};
    for (int i = 0; i < 3; ++i) {
      SweepPoint p;
      p.grid_value = grid[i];
      p.ok = true;
      p.report.improvement.defined = true;
      p.report.improvement.ratio = improv[i];
      res.points.push_back(p);
    }
    const auto x = find_crossing(res);
    const bool interp_ok = x.has_value() && std::abs(*x - 11.0 / 15.0) <= 1e-12;

    for (int i = 0; i < 3; ++i) res.points[static_cast<std::size_t>(i)].report.improvement.ratio = 0.1 + i;
    const bool none_ok = !find_crossing(res).has_value();

    detail = std::string("interpolated ") + (x ? fmt(*x) : "none") +
             " (want 0.7333...), monotone-positive gives none: " +
             (none_ok ? "yes" : "no");
    return interp_ok && none_ok;
  }

  bool retention(std::string& detail) {
    const int a = detail::eliminate_worst_retained(0.98, 100);
    const int b = detail::eliminate_worst_retained(0.75, 100);
    const int c = detail::eliminate_worst_retained(0.0, 100);
    const int d = detail::eliminate_worst_retained(0.5, 7);
    detail = "retained(0.98,100)=" + std::to_string(a) + " retained(0.75,100)=" +
             std::to_string(b) + " retained(0,100)=" + std::to_string(c) +
             " retained(0.5,7)=" + std::to_string(d);
    return a == 2 && b == 25 && c == 100 && d == 4;
  }

  bool roundtrip(std::string& detail) {
    const SweepConfig fig3 = figure_preset("fig3").sweep;
    const std::string text = serialize_config(fig3);
    const ParsedConfig parsed = parse_config(text);
    const bool text_ok = serialize_config(parsed.config) == text;
    const bool digest_ok = config_digest(parsed.config) == config_digest(fig3);

    bool rejects = false;
    try {
      parse_config("{\"n_ideas\": 10}");
    } catch (const ConfigError&) {
      rejects = true;
    }
    detail = std::string("round-trip ") + (text_ok ? "stable" : "UNSTABLE") +
             ", digest " + (digest_ok ? "stable" : "UNSTABLE") +
             ", incomplete config rejected: " + (rejects ? "yes" : "no");
    return text_ok && digest_ok && rejects;
  }

  bool determinism(std::string& detail) {
    const ModelConfig m = figure_preset("fig2").histogram.model;
    const DecompositionReport a =
        run_single(m, scale_.determinism_trials, {seed_, 3600}, 1);
    const DecompositionReport b =
        run_single(m, scale_.determinism_trials, {seed_, 3600}, 1);
    const DecompositionReport c =
        run_single(m, scale_.determinism_trials, {seed_, 3600}, 4);
    const std::string ja = report_to_json(a);
    const bool rerun_ok = ja == report_to_json(b);
    const bool worker_ok = ja == report_to_json(c);
    detail = std::string("rerun byte-identical: ") + (rerun_ok ? "yes" : "no") +
             ", workers 1 vs 4 byte-identical: " + (worker_ok ? "yes" : "no");
    return rerun_ok && worker_ok;
  }

  const Scale& scale_;
  std::uint64_t seed_;
  int workers_;
  ValidationOutcome outcome_;
  DecompositionReport contested_;
  bool contested_done_ = false;
};

}  // namespace

int ValidationOutcome::n_failed() const {
  int n = 0;
  for (const CheckResult& c : checks) {
    if (!c.passed) ++n;
  }
  return n;
}

std::string ValidationOutcome::text() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
  }
  out << checks.size() - static_cast<std::size_t>(n_failed()) << '/' << checks.size()
      << " checks passed\n";
  return out.str();
}

ModelConfig random_model_config(RngStream& rng) {
  ModelConfig m;
  m.universe.n_ideas = 2 + static_cast<int>(rng.next_u64() % 29);  // 2..30

  const auto random_dist = [&rng](double sd_lo, double sd_hi) {
    if (rng.uniform01() < 0.25) {
      // small discrete law with positive probabilities summing to 1
      const int k = 2 + static_cast<int>(rng.next_u64() % 3);
      std::vector<DiscretePoint> pts;
      double total = 0.0;
      for (int i = 0; i < k; ++i) {
        DiscretePoint p;
        p.value = -1.5 + 3.0 * rng.uniform01();
        p.probability = 0.1 + rng.uniform01();
        total += p.probability;
        pts.push_back(p);
      }
      for (DiscretePoint& p : pts) p.probability /= total;
      // Renormalization leaves a tiny residue; push it into the last point.
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += pts[i].probability;
      pts.back().probability = 1.0 - sum;
      return ScalarDistribution::make_discrete(std::move(pts));
    }
    const double mean = -0.5 + rng.uniform01();
    const double sd = sd_lo + (sd_hi - sd_lo) * rng.uniform01();
    return ScalarDistribution::make_normal(mean, sd);
  };
  m.universe.mu_dist = random_dist(0.2, 2.0);
  m.universe.eps_dist = random_dist(0.3, 1.5);

  m.prob_good = 0.2 + 0.6 * rng.uniform01();

  const auto random_policy = [&rng](TheoryType label, int n) {
    const double u = rng.uniform01();
    if (u < 0.34) return TheoryPolicy::uniform_all(label);
    if (u < 0.67) {
      return TheoryPolicy::top_k(label, 1 + static_cast<int>(rng.next_u64() %
                                                             static_cast<std::uint64_t>(n)));
    }
    return TheoryPolicy::eliminate_worst(label, 0.9 * rng.uniform01());
  };
  m.good_policy = random_policy(TheoryType::good, m.universe.n_ideas);
  m.bad_policy = random_policy(TheoryType::bad, m.universe.n_ideas);

  // Keep the hurdle low enough that every cell publishes at 10^4 trials.
  m.hurdle = rng.uniform01() < 0.3 ? -std::numeric_limits<double>::infinity()
                                   : -1.5 + 2.0 * rng.uniform01();
  m.validate();
  return m;
}

ValidationOutcome run_validation(bool quick, std::uint64_t seed, int workers) {
  Suite suite(quick ? kQuick : kFull, seed, workers);
  return suite.run();
}

}  // namespace posthoc
