#pragma once

#include <string>
#include <vector>

#include "posthoc/rng.hpp"

namespace posthoc {

struct DiscretePoint {
  double value = 0.0;
  double probability = 0.0;
};

// A scalar law: either Normal(mean, sd) with sd >= 0 (sd == 0 is a point
// mass) or a finite discrete distribution with strictly positive
// probabilities summing to 1 within 1e-12.
class ScalarDistribution {
 public:
  enum class Kind { normal, discrete };

  static ScalarDistribution make_normal(double mean, double sd);
  static ScalarDistribution make_discrete(std::vector<DiscretePoint> points);

  // Throws ConfigError naming `field` on invalid parameters.
  void validate(const std::string& field) const;

  Kind kind() const { return kind_; }
  double normal_mean() const { return mean_; }
  double normal_sd() const { return sd_; }
  const std::vector<DiscretePoint>& points() const { return points_; }

  double sample(RngStream& rng) const;

  double mean() const;
  double variance() const;
  double sd() const;

  // True when every draw equals `value` exactly.
  bool is_point_mass_at(double value) const;

  // The law of factor * X (factor > 0).
  ScalarDistribution scaled(double factor) const;

  bool operator==(const ScalarDistribution& other) const;

 private:
  Kind kind_ = Kind::normal;
  double mean_ = 0.0;
  double sd_ = 1.0;
  std::vector<DiscretePoint> points_;
};

}  // namespace posthoc
