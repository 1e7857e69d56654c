// Self-contained SVG charts (no plotting dependency, no external assets).
//
// Three chart kinds cover the built-in studies: a paired scatter with a
// 45-degree reference, stacked type-colored histogram pairs with mean and
// hurdle lines, and the sweep line chart with a zero line, a crossing
// marker, and a learning-components panel.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posthoc/sweep.hpp"

namespace posthoc {

// Auto-corrections applied while plotting (e.g. a degenerate axis range
// expanded); the caller routes these into the run manifest.
using PlotWarnings = std::vector<std::string>;

// Every data point is a <circle class="mark">; reference diagonal included.
std::string scatter_svg(const ScatterData& data, PlotWarnings& warnings);

// Two panels (a-priori left, post-hoc right) on a shared scale; bars are
// stacked by theory type, the dashed line marks the panel mean, the solid
// line the hurdle. Empty panels carry a "no published trials" note.
std::string histogram_pair_svg(const HistogramSeries& series_O,
                               const HistogramSeries& series_D, double hurdle,
                               const std::string& title, PlotWarnings& warnings);

// Improvement vs grid on top (zero line, optional crossing marker), the
// darwinian/statistical learning curves below.
std::string sweep_svg(const SweepResult& result, std::optional<double> crossing,
                      PlotWarnings& warnings);

}  // namespace posthoc
