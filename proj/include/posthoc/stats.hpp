// Small statistics helpers shared by the engine, the validation suite, and
// the tests: normal CDF, chi-square survival function, Spearman rank
// correlation, and a Welford-style mean/variance accumulator.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace posthoc::stats {

// P(Z <= x) for Z ~ N(0,1).
double normal_cdf(double x);

// Upper-tail regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// P(X > x) for X ~ chi-square with df degrees of freedom.
double chi_square_sf(double x, double df);

// Spearman rank correlation; ties get average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// Streaming mean / sample variance over raw sums.
struct RunningMoments {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const RunningMoments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double sample_variance() const;
  double se_mean() const;
};

}  // namespace posthoc::stats
