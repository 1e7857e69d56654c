#include "posthoc/sweep.hpp"

#include <cmath>
#include <limits>

#include "posthoc/errors.hpp"
#include "posthoc/parallel.hpp"

namespace posthoc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// The two-types-of-theorists model behind the histogram study; also the
// base every sweep preset mutates.
ModelConfig contested_model() {
  ModelConfig m;
  m.universe.n_ideas = 100;
  m.universe.mu_dist = ScalarDistribution::make_normal(0.0, 0.5);
  m.universe.eps_dist = ScalarDistribution::make_normal(0.0, 1.0);
  m.prob_good = 0.5;
  m.good_policy = TheoryPolicy::top_k(TheoryType::good, 2);
  m.bad_policy = TheoryPolicy::uniform_all(TheoryType::bad);
  m.hurdle = 2.0;
  return m;
}

// Selection-bias scatter model: one uniform type, nothing filtered out.
ModelConfig open_model() {
  ModelConfig m;
  m.universe.n_ideas = 100;
  m.universe.mu_dist = ScalarDistribution::make_normal(0.0, 1.0);
  m.universe.eps_dist = ScalarDistribution::make_normal(0.0, 1.0);
  m.prob_good = 0.0;
  m.good_policy = TheoryPolicy::uniform_all(TheoryType::good);
  m.bad_policy = TheoryPolicy::uniform_all(TheoryType::bad);
  m.hurdle = -std::numeric_limits<double>::infinity();
  return m;
}

double sd_mu_hat_of(const ModelConfig& m) {
  return std::sqrt(m.universe.mu_dist.variance() + m.universe.eps_dist.variance());
}

}  // namespace

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::none: return "none";
    case SweepAxis::heterogeneity_q: return "heterogeneity_q";
    case SweepAxis::mu_sd: return "mu_sd";
  }
  return "none";
}

void SweepConfig::validate() const {
  base.validate();
  if (n_trials < 10000) {
    throw ConfigError("sweep n_trials must be at least 10000, got " +
                      std::to_string(n_trials));
  }
  if (axis == SweepAxis::none) {
    if (!grid.empty()) throw ConfigError("grid requires a sweep axis");
    return;
  }
  if (grid.empty()) throw ConfigError("sweep grid must not be empty");
  double prev = -std::numeric_limits<double>::infinity();
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError("sweep grid values must be finite");
    if (!(v > prev)) throw ConfigError("sweep grid must be strictly increasing");
    prev = v;
    if (axis == SweepAxis::heterogeneity_q && !(v >= 0.0 && v < 1.0)) {
      throw ConfigError("heterogeneity_q grid values must be in [0, 1), got " +
                        std::to_string(v));
    }
    if (axis == SweepAxis::mu_sd && !(v > 0.0)) {
      throw ConfigError("mu_sd grid values must be positive, got " + std::to_string(v));
    }
  }
  if (axis == SweepAxis::mu_sd &&
      base.universe.mu_dist.kind() != ScalarDistribution::Kind::normal) {
    throw ConfigError("mu_sd sweeps need a normal mu_dist to rescale");
  }
}

ModelConfig sweep_point_model(const SweepConfig& config, std::size_t point_index) {
  if (config.axis == SweepAxis::none) {
    if (point_index != 0) throw PreconditionError("no-axis sweep has a single point");
    return config.base;
  }
  if (point_index >= config.grid.size()) {
    throw PreconditionError("grid point index out of range");
  }
  ModelConfig m = config.base;
  const double v = config.grid[point_index];
  switch (config.axis) {
    case SweepAxis::none:
      break;
    case SweepAxis::heterogeneity_q:
      m.good_policy = TheoryPolicy::eliminate_worst(TheoryType::good, v);
      break;
    case SweepAxis::mu_sd:
      m.universe.mu_dist =
          ScalarDistribution::make_normal(m.universe.mu_dist.normal_mean(), v);
      break;
  }
  return m;
}

DecompositionReport run_single(const ModelConfig& config, std::int64_t n_trials,
                               RngSeed seed, int workers) {
  config.validate();
  return estimate_report(run_trials_blocked(config, n_trials, seed, workers));
}

SweepResult run_sweep(const SweepConfig& config, int workers) {
  config.validate();
  SweepResult result;
  result.config = config;
  const std::size_t n_points = config.axis == SweepAxis::none ? 1 : config.grid.size();
  result.points.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const ModelConfig model = sweep_point_model(config, i);
    SweepPoint point;
    point.grid_value = config.axis == SweepAxis::none ? kNaN : config.grid[i];
    point.sd_mu = model.universe.mu_dist.sd();
    point.sd_mu_hat = sd_mu_hat_of(model);
    const TrialAccumulator acc = run_trials_blocked(
        model, config.n_trials, {config.master_seed, static_cast<std::uint64_t>(i)},
        workers);
    try {
      point.report = estimate_report(acc);
      point.ok = true;
    } catch (const InsufficientDataError& e) {
      point.failure_reason = e.what();
    } catch (const PreconditionError& e) {
      point.failure_reason = e.what();
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

std::optional<double> find_crossing(const SweepResult& result) {
  struct Defined {
    double x;
    double y;
  };
  std::vector<Defined> pts;
  for (const SweepPoint& p : result.points) {
    if (p.ok && p.report.improvement.defined) {
      pts.push_back({p.grid_value, p.report.improvement.ratio});
    }
  }
  if (pts.size() < 2) {
    throw PreconditionError(
        "crossing search needs at least two points with defined improvement");
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].y == 0.0) return pts[i].x;
    const double y0 = pts[i].y;
    const double y1 = pts[i + 1].y;
    if ((y0 < 0.0 && y1 > 0.0) || (y0 > 0.0 && y1 < 0.0)) {
      const double x0 = pts[i].x;
      const double x1 = pts[i + 1].x;
      return x0 + (x1 - x0) * (0.0 - y0) / (y1 - y0);
    }
  }
  if (pts.back().y == 0.0) return pts.back().x;
  return std::nullopt;
}

ScatterData run_scatter(const ScatterJob& job, RngSeed seed) {
  job.model.validate();
  if (job.n_pairs < 1) throw ConfigError("scatter needs at least one trial pair");
  ScatterData data;
  data.hurdle = job.model.hurdle;
  data.marks.reserve(static_cast<std::size_t>(2 * job.n_pairs));
  TrialWorkspace ws;
  for (std::int64_t trial = 0; trial < job.n_pairs; ++trial) {
    const PairedTrial pair = run_paired_trial(job.model, trial, seed, ws);
    for (const TrialRecord* r : {&pair.a_priori, &pair.post_hoc}) {
      ScatterMark mark;
      mark.regime = r->regime;
      mark.mu_hat = r->mu_hat_star;
      mark.mu = r->mu_star;
      mark.published = r->published;
      data.marks.push_back(mark);
    }
  }
  return data;
}

double HistogramSeries::mean_mu_hat() const {
  return n > 0 ? sum_mu_hat / static_cast<double>(n)
               : std::numeric_limits<double>::quiet_NaN();
}

HistogramData run_histogram(const HistogramJob& job, RngSeed seed) {
  job.model.validate();
  if (job.n_trials < 1) throw ConfigError("histogram needs at least one trial");
  if (job.n_bins < 2) throw ConfigError("histogram needs at least two bins");

  // Fixed binning derived from the model so the layout is deterministic;
  // outliers land in the edge bins.
  const double mean_hat =
      job.model.universe.mu_dist.mean() + job.model.universe.eps_dist.mean();
  const double sd_hat = sd_mu_hat_of(job.model);
  const double half = sd_hat > 0.0 ? 5.0 * sd_hat : 1.0;
  const double lo = mean_hat - half;
  const double hi = mean_hat + half;

  HistogramData data;
  data.hurdle = job.model.hurdle;
  const auto init = [&](HistogramSeries& s, const char* label) {
    s.label = label;
    s.lo = lo;
    s.hi = hi;
    s.good_counts.assign(static_cast<std::size_t>(job.n_bins), 0);
    s.bad_counts.assign(static_cast<std::size_t>(job.n_bins), 0);
  };
  init(data.all_O, "a_priori all");
  init(data.all_D, "post_hoc all");
  init(data.pub_O, "a_priori published");
  init(data.pub_D, "post_hoc published");

  const double width = (hi - lo) / static_cast<double>(job.n_bins);
  const auto deposit = [&](HistogramSeries& s, const TrialRecord& r) {
    int bin = static_cast<int>(std::floor((r.mu_hat_star - lo) / width));
    if (bin < 0) bin = 0;
    if (bin >= job.n_bins) bin = job.n_bins - 1;
    auto& counts = r.theory_type == TheoryType::good ? s.good_counts : s.bad_counts;
    ++counts[static_cast<std::size_t>(bin)];
    ++s.n;
    s.sum_mu_hat += r.mu_hat_star;
  };

  TrialAccumulator acc;
  TrialWorkspace ws;
  for (std::int64_t trial = 0; trial < job.n_trials; ++trial) {
    const PairedTrial pair = run_paired_trial(job.model, trial, seed, ws);
    acc.add_pair(pair);
    deposit(data.all_O, pair.a_priori);
    deposit(data.all_D, pair.post_hoc);
    if (pair.a_priori.published) deposit(data.pub_O, pair.a_priori);
    if (pair.post_hoc.published) deposit(data.pub_D, pair.post_hoc);
  }
  try {
    data.report = estimate_report(acc);
    data.report_ok = true;
  } catch (const InsufficientDataError& e) {
    data.report_reason = e.what();
  } catch (const PreconditionError& e) {
    data.report_reason = e.what();
  }
  return data;
}

FigurePreset figure_preset(const std::string& name) {
  FigurePreset preset;
  preset.name = name;
  if (name == "fig1") {
    preset.kind = FigureKind::scatter;
    preset.scatter.model = open_model();
    preset.scatter.n_pairs = 100;
    return preset;
  }
  if (name == "fig2") {
    preset.kind = FigureKind::histogram;
    preset.histogram.model = contested_model();
    preset.histogram.n_trials = 1'000'000;
    return preset;
  }
  if (name == "fig3") {
    preset.kind = FigureKind::sweep;
    preset.sweep.base = contested_model();
    preset.sweep.axis = SweepAxis::heterogeneity_q;
    for (int i = 0; i <= 19; ++i) preset.sweep.grid.push_back(i / 20.0);
    preset.sweep.grid.push_back(0.98);
    preset.sweep.n_trials = 1'000'000;
    preset.sweep.master_seed = 42;
    return preset;
  }
  if (name == "fig4") {
    preset.kind = FigureKind::sweep;
    preset.sweep.base = contested_model();
    preset.sweep.axis = SweepAxis::mu_sd;
    for (int i = 0; i <= 10; ++i) preset.sweep.grid.push_back(0.5 + 0.25 * i);
    preset.sweep.n_trials = 1'000'000;
    preset.sweep.master_seed = 42;
    return preset;
  }
  throw ConfigError("unknown figure preset \"" + name +
                    "\" (expected fig1, fig2, fig3, or fig4)");
}

}  // namespace posthoc
