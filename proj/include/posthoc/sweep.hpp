// Parameter sweeps and the four built-in study presets.
//
// A sweep runs the paired-trial ensemble across an ordered grid, mutating
// one knob of the base model per point: the elimination share of good
// theories (heterogeneity_q) or the spread of true quality (mu_sd). Stream
// contexts are derived from the point index, so every point — and every
// trial within it — is reproducible in isolation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posthoc/decomposition.hpp"
#include "posthoc/rng.hpp"
#include "posthoc/theory.hpp"

namespace posthoc {

enum class SweepAxis { none, heterogeneity_q, mu_sd };

const char* to_string(SweepAxis axis);

struct SweepConfig {
  ModelConfig base;
  SweepAxis axis = SweepAxis::none;
  std::vector<double> grid;  // empty iff axis == none
  std::int64_t n_trials = 1'000'000;
  std::uint64_t master_seed = 42;

  void validate() const;
};

struct SweepPoint {
  double grid_value = 0.0;  // NaN for a no-axis run
  double sd_mu = 0.0;
  double sd_mu_hat = 0.0;
  bool ok = false;
  std::string failure_reason;  // set when !ok; point kept so the grid stays whole
  DecompositionReport report;  // meaningful when ok
};

struct SweepResult {
  SweepConfig config;  // echo; seed and trial count live here
  std::vector<SweepPoint> points;
};

// The model a given grid point actually runs.
ModelConfig sweep_point_model(const SweepConfig& config, std::size_t point_index);

// One model, no grid: the building block simulate-style runs go through.
// seed.stream_index doubles as the point context.
DecompositionReport run_single(const ModelConfig& config, std::int64_t n_trials,
                               RngSeed seed, int workers);

SweepResult run_sweep(const SweepConfig& config, int workers);

// Linearly interpolated zero of the improvement curve: the first adjacent
// pair of defined points whose improvements have strictly opposite signs
// (an exact zero at a grid point is returned as-is). nullopt when the curve
// never changes sign.
std::optional<double> find_crossing(const SweepResult& result);

// --- study presets -----------------------------------------------------------

// fig1: paired scatter of selected ideas, no hurdle, one uniform type.
struct ScatterJob {
  ModelConfig model;
  std::int64_t n_pairs = 100;  // 2 marks per pair
};

struct ScatterMark {
  Regime regime = Regime::a_priori;
  double mu_hat = 0.0;  // measured quality of the selected idea
  double mu = 0.0;      // its true quality
  bool published = false;
};

struct ScatterData {
  std::vector<ScatterMark> marks;  // trial order, a-priori before post-hoc
  double hurdle = 0.0;
};

ScatterData run_scatter(const ScatterJob& job, RngSeed seed);

// fig2: measured-quality histograms (all vs published x regime), stacked by
// theory type, plus the standard report over the same trials.
struct HistogramJob {
  ModelConfig model;
  std::int64_t n_trials = 1'000'000;
  int n_bins = 64;
};

struct HistogramSeries {
  std::string label;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::int64_t> good_counts;  // per bin
  std::vector<std::int64_t> bad_counts;
  std::int64_t n = 0;
  double sum_mu_hat = 0.0;  // for the dashed mean line

  double mean_mu_hat() const;
};

struct HistogramData {
  HistogramSeries all_O, all_D, pub_O, pub_D;
  double hurdle = 0.0;
  bool report_ok = false;      // false when a published cell is empty
  std::string report_reason;   // the failure text in that case
  DecompositionReport report;  // meaningful when report_ok
};

HistogramData run_histogram(const HistogramJob& job, RngSeed seed);

enum class FigureKind { scatter, histogram, sweep };

struct FigurePreset {
  std::string name;
  FigureKind kind = FigureKind::sweep;
  ScatterJob scatter;      // fig1
  HistogramJob histogram;  // fig2
  SweepConfig sweep;       // fig3 / fig4
};

// Frozen constants behind fig1..fig4; unknown names are ConfigErrors.
FigurePreset figure_preset(const std::string& name);

}  // namespace posthoc
