#include "posthoc/distribution.hpp"

#include <cmath>
#include <sstream>

#include "posthoc/errors.hpp"

namespace posthoc {

ScalarDistribution ScalarDistribution::make_normal(double mean, double sd) {
  ScalarDistribution d;
  d.kind_ = Kind::normal;
  d.mean_ = mean;
  d.sd_ = sd;
  return d;
}

ScalarDistribution ScalarDistribution::make_discrete(std::vector<DiscretePoint> points) {
  ScalarDistribution d;
  d.kind_ = Kind::discrete;
  d.points_ = std::move(points);
  return d;
}

void ScalarDistribution::validate(const std::string& field) const {
  if (kind_ == Kind::normal) {
    if (!std::isfinite(mean_))
      throw ConfigError(field + ".mean: must be finite");
    if (!(sd_ >= 0.0) || !std::isfinite(sd_))
      throw ConfigError(field + ".sd: must be >= 0 and finite, got " + std::to_string(sd_));
    return;
  }
  if (points_.empty())
    throw ConfigError(field + ".points: discrete distribution needs at least one point");
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.value))
      throw ConfigError(field + ".points[" + std::to_string(i) + "].value: must be finite");
    if (!(p.probability > 0.0) || !std::isfinite(p.probability))
      throw ConfigError(field + ".points[" + std::to_string(i) +
                        "].probability: must be strictly positive");
    total += p.probability;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << field << ".points: probabilities must sum to 1 within 1e-12, got " << total;
    throw ConfigError(os.str());
  }
}

double ScalarDistribution::sample(RngStream& rng) const {
  if (kind_ == Kind::normal) {
    if (sd_ == 0.0) return mean_;
    return mean_ + sd_ * rng.normal();
  }
  // Cumulative walk in point order; one uniform per draw.
  const double u = rng.uniform01();
  double cum = 0.0;
  for (const auto& p : points_) {
    cum += p.probability;
    if (u < cum) return p.value;
  }
  return points_.back().value;
}

double ScalarDistribution::mean() const {
  if (kind_ == Kind::normal) return mean_;
  double m = 0.0;
  for (const auto& p : points_) m += p.value * p.probability;
  return m;
}

double ScalarDistribution::variance() const {
  if (kind_ == Kind::normal) return sd_ * sd_;
  const double m = mean();
  double v = 0.0;
  for (const auto& p : points_) v += (p.value - m) * (p.value - m) * p.probability;
  return v;
}

double ScalarDistribution::sd() const { return std::sqrt(variance()); }

bool ScalarDistribution::is_point_mass_at(double value) const {
  if (kind_ == Kind::normal) return sd_ == 0.0 && mean_ == value;
  for (const auto& p : points_)
    if (p.value != value) return false;
  return true;
}

ScalarDistribution ScalarDistribution::scaled(double factor) const {
  if (kind_ == Kind::normal) return make_normal(mean_ * factor, sd_ * std::fabs(factor));
  auto pts = points_;
  for (auto& p : pts) p.value *= factor;
  return make_discrete(std::move(pts));
}

bool ScalarDistribution::operator==(const ScalarDistribution& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::normal) return mean_ == other.mean_ && sd_ == other.sd_;
  if (points_.size() != other.points_.size()) return false;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].value != other.points_[i].value ||
        points_[i].probability != other.points_[i].probability)
      return false;
  return true;
}

}  // namespace posthoc
