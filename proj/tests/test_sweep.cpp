#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "posthoc/errors.hpp"
#include "posthoc/sweep.hpp"

using namespace posthoc;

namespace {

SweepConfig small_sweep() {
  SweepConfig config;
  config.base.universe.n_ideas = 20;
  config.base.prob_good = 0.5;
  config.base.good_policy = TheoryPolicy::eliminate_worst(TheoryType::good, 0.5);
  config.base.hurdle = 0.5;
  config.axis = SweepAxis::heterogeneity_q;
  config.grid = {0.0, 0.5, 0.9};
  config.n_trials = 10000;
  config.master_seed = 42;
  return config;
}

SweepResult fake_curve(std::vector<double> grid, std::vector<double> improvements) {
  SweepResult result;
  result.config.grid = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepPoint pt;
    pt.grid_value = grid[i];
    pt.ok = true;
    pt.report.improvement.defined = true;
    pt.report.improvement.ratio = improvements[i];
    result.points.push_back(pt);
  }
  return result;
}

}  // namespace

TEST_CASE("sweep config validation") {
  SweepConfig config = small_sweep();
  CHECK_NOTHROW(config.validate());

  SweepConfig unsorted = small_sweep();
  unsorted.grid = {0.5, 0.0};
  CHECK_THROWS_AS(unsorted.validate(), ConfigError);

  SweepConfig empty = small_sweep();
  empty.grid.clear();
  CHECK_THROWS_AS(empty.validate(), ConfigError);

  SweepConfig out_of_range = small_sweep();
  out_of_range.grid = {0.0, 1.0};  // q = 1 eliminates everything
  CHECK_THROWS_AS(out_of_range.validate(), ConfigError);

  SweepConfig tiny = small_sweep();
  tiny.n_trials = 100;  // too small for stable conditional cells
  CHECK_THROWS_AS(tiny.validate(), ConfigError);

  SweepConfig sd_axis = small_sweep();
  sd_axis.axis = SweepAxis::mu_sd;
  sd_axis.grid = {0.5, 1.0};
  CHECK_NOTHROW(sd_axis.validate());
  sd_axis.grid = {0.0, 1.0};  // sd must be positive on this axis
  CHECK_THROWS_AS(sd_axis.validate(), ConfigError);

  SweepConfig discrete_mu = sd_axis;
  discrete_mu.grid = {0.5, 1.0};
  discrete_mu.base.universe.mu_dist =
      ScalarDistribution::make_discrete({{0.0, 0.5}, {1.0, 0.5}});
  CHECK_THROWS_AS(discrete_mu.validate(), ConfigError);  // no sd knob to turn
}

TEST_CASE("grid points mutate exactly one knob of the base model") {
  const SweepConfig config = small_sweep();
  const ModelConfig at_09 = sweep_point_model(config, 2);
  CHECK(at_09.good_policy.rule == TheoryPolicy::Rule::eliminate_worst);
  CHECK(at_09.good_policy.q == doctest::Approx(0.9));
  CHECK(at_09.bad_policy.rule == TheoryPolicy::Rule::uniform_all);
  CHECK(at_09.universe.n_ideas == config.base.universe.n_ideas);

  SweepConfig sd_axis = config;
  sd_axis.axis = SweepAxis::mu_sd;
  sd_axis.grid = {0.5, 2.5};
  const ModelConfig at_25 = sweep_point_model(sd_axis, 1);
  CHECK(at_25.universe.mu_dist.sd() == doctest::Approx(2.5));
  CHECK(at_25.universe.mu_dist.mean() ==
        doctest::Approx(config.base.universe.mu_dist.mean()));
  CHECK(at_25.universe.eps_dist == config.base.universe.eps_dist);
}

TEST_CASE("sweep runs every grid point and echoes the config") {
  const SweepConfig config = small_sweep();
  const SweepResult result = run_sweep(config, 1);
  REQUIRE(result.points.size() == 3u);
  CHECK(result.config.master_seed == 42u);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(result.points[i].grid_value == doctest::Approx(config.grid[i]));
    CHECK(result.points[i].ok);
    CHECK(result.points[i].report.n_published_D > 0);
    CHECK(result.points[i].sd_mu == doctest::Approx(1.0));
    CHECK(result.points[i].sd_mu_hat == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("a failing grid point is kept with its reason") {
  SweepConfig config = small_sweep();
  config.base.hurdle = 1e9;  // nothing will publish
  const SweepResult result = run_sweep(config, 1);
  REQUIRE(result.points.size() == 3u);
  for (const SweepPoint& pt : result.points) {
    CHECK_FALSE(pt.ok);
    CHECK(pt.failure_reason.find("insufficient published trials") !=
          std::string::npos);
  }
  CHECK_THROWS_AS(find_crossing(result), PreconditionError);
}

TEST_CASE("worker counts do not change sweep results") {
  const SweepConfig config = small_sweep();
  const SweepResult one = run_sweep(config, 1);
  const SweepResult four = run_sweep(config, 4);
  for (std::size_t i = 0; i < one.points.size(); ++i) {
    CHECK(one.points[i].report.mean_mu_O == four.points[i].report.mean_mu_O);
    CHECK(one.points[i].report.mean_mu_D == four.points[i].report.mean_mu_D);
    CHECK(one.points[i].report.improvement.ratio ==
          four.points[i].report.improvement.ratio);
  }
}

TEST_CASE("find_crossing interpolates the documented example") {
  const SweepResult curve = fake_curve({0.6, 0.7, 0.8}, {-0.2, -0.05, 0.1});
  const std::optional<double> x = find_crossing(curve);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(0.7 + 0.1 * (0.05 / 0.15)).epsilon(1e-12));
  CHECK(*x == doctest::Approx(0.7333333333333334).epsilon(1e-12));
}

TEST_CASE("find_crossing handles signs, zeros, and undefined points") {
  CHECK_FALSE(find_crossing(fake_curve({0.0, 1.0, 2.0}, {0.1, 0.2, 0.3})).has_value());
  CHECK_FALSE(find_crossing(fake_curve({0.0, 1.0}, {-0.2, -0.1})).has_value());

  // An exact zero at a grid point is that grid point.
  const std::optional<double> at_zero =
      find_crossing(fake_curve({0.0, 1.0, 2.0}, {-0.1, 0.0, 0.1}));
  REQUIRE(at_zero.has_value());
  CHECK(*at_zero == doctest::Approx(1.0));

  // Positive-to-negative also counts (fig3 runs downhill).
  const std::optional<double> downhill =
      find_crossing(fake_curve({0.0, 1.0}, {0.1, -0.1}));
  REQUIRE(downhill.has_value());
  CHECK(*downhill == doctest::Approx(0.5));

  // Undefined points are skipped, not interpolated through.
  SweepResult gappy = fake_curve({0.0, 1.0, 2.0}, {-0.1, 99.0, 0.1});
  gappy.points[1].ok = false;
  gappy.points[1].report.improvement.defined = false;
  const std::optional<double> bridged = find_crossing(gappy);
  REQUIRE(bridged.has_value());
  CHECK(*bridged == doctest::Approx(1.0));  // interpolates 0.0 .. 2.0

  SweepResult lonely = fake_curve({0.0}, {0.5});
  CHECK_THROWS_AS(find_crossing(lonely), PreconditionError);
}

TEST_CASE("scatter study emits two marks per pair in trial order") {
  ScatterJob job;
  job.model.universe.n_ideas = 15;
  job.model.prob_good = 0.0;
  job.model.hurdle = -std::numeric_limits<double>::infinity();
  job.n_pairs = 50;
  const ScatterData data = run_scatter(job, {42, 0});
  REQUIRE(data.marks.size() == 100u);
  for (std::size_t i = 0; i < data.marks.size(); i += 2) {
    CHECK(data.marks[i].regime == Regime::a_priori);
    CHECK(data.marks[i + 1].regime == Regime::post_hoc);
    CHECK(data.marks[i].published);
  }
}

TEST_CASE("histogram study bins every trial and keeps the report") {
  HistogramJob job;
  job.model.universe.n_ideas = 20;
  job.model.prob_good = 0.5;
  job.model.good_policy = TheoryPolicy::top_k(TheoryType::good, 3);
  job.model.hurdle = 0.5;
  job.n_trials = 20000;
  job.n_bins = 32;
  const HistogramData data = run_histogram(job, {42, 0});
  CHECK(data.hurdle == doctest::Approx(0.5));
  CHECK(data.report_ok);

  std::int64_t all_O_total = 0;
  for (std::size_t b = 0; b < data.all_O.good_counts.size(); ++b) {
    all_O_total += data.all_O.good_counts[b] + data.all_O.bad_counts[b];
  }
  CHECK(all_O_total == 20000);
  CHECK(data.all_O.n == 20000);
  CHECK(data.pub_O.n == data.report.n_published_O);
  CHECK(data.pub_D.n == data.report.n_published_D);
  CHECK(data.all_O.good_counts.size() == 32u);
  CHECK(data.all_O.label == "a_priori all");
  CHECK(data.pub_D.label == "post_hoc published");
  // Published panels have (weakly) higher means than the all panel.
  CHECK(data.pub_O.mean_mu_hat() >= data.all_O.mean_mu_hat());
}

TEST_CASE("figure presets freeze the studies") {
  const FigurePreset fig1 = figure_preset("fig1");
  CHECK(fig1.kind == FigureKind::scatter);
  CHECK(fig1.scatter.n_pairs == 100);
  CHECK(fig1.scatter.model.universe.n_ideas == 100);
  CHECK(fig1.scatter.model.hurdle == -std::numeric_limits<double>::infinity());
  CHECK(fig1.scatter.model.prob_good == 0.0);

  const FigurePreset fig2 = figure_preset("fig2");
  CHECK(fig2.kind == FigureKind::histogram);
  CHECK(fig2.histogram.model.hurdle == doctest::Approx(2.0));
  CHECK(fig2.histogram.model.prob_good == doctest::Approx(0.5));
  CHECK(fig2.histogram.model.universe.mu_dist.sd() == doctest::Approx(0.5));
  CHECK(fig2.histogram.model.good_policy.rule == TheoryPolicy::Rule::top_k);
  CHECK(fig2.histogram.model.good_policy.k == 2);
  CHECK(fig2.histogram.n_trials == 1000000);

  const FigurePreset fig3 = figure_preset("fig3");
  CHECK(fig3.kind == FigureKind::sweep);
  CHECK(fig3.sweep.axis == SweepAxis::heterogeneity_q);
  REQUIRE(fig3.sweep.grid.size() == 21u);
  CHECK(fig3.sweep.grid.front() == doctest::Approx(0.0));
  CHECK(fig3.sweep.grid[19] == doctest::Approx(0.95));
  CHECK(fig3.sweep.grid.back() == doctest::Approx(0.98));
  CHECK(fig3.sweep.n_trials == 1000000);
  CHECK(fig3.sweep.master_seed == 42u);

  const FigurePreset fig4 = figure_preset("fig4");
  CHECK(fig4.kind == FigureKind::sweep);
  CHECK(fig4.sweep.axis == SweepAxis::mu_sd);
  REQUIRE(fig4.sweep.grid.size() == 11u);
  CHECK(fig4.sweep.grid.front() == doctest::Approx(0.5));
  CHECK(fig4.sweep.grid.back() == doctest::Approx(3.0));

  CHECK_THROWS_WITH_AS(figure_preset("fig9"), doctest::Contains("fig9"), ConfigError);
}

TEST_CASE("run_single produces the same report as the sweep machinery") {
  SweepConfig config = small_sweep();
  config.axis = SweepAxis::none;
  config.grid.clear();
  const DecompositionReport direct =
      run_single(config.base, config.n_trials, {config.master_seed, 0}, 1);
  CHECK(direct.n_published_O > 0);
  CHECK(std::abs(direct.identity_residual) <= 1e-12);
}
