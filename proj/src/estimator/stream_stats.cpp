#include "agentsim/estimator/stream_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace agentsim::estimator {

void StreamStats::add(double x) {
  ++count_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(count_);
  m2_ += d * (x - mean_);
}

double StreamStats::variance() const {
  if (count_ < 2) return 0.0;
  return m2_ / static_cast<double>(count_ - 1);
}

double StreamStats::stddev() const { return std::sqrt(variance()); }

StreamStats StreamStats::from_moments(std::uint64_t count, double mean, double stddev) {
  StreamStats s;
  s.count_ = count;
  s.mean_ = count == 0 ? 0.0 : mean;
  s.m2_ = count < 2 ? 0.0 : stddev * stddev * static_cast<double>(count - 1);
  return s;
}

double bernstein_bound(const StreamStats& stats, double delta, double upper_bound) {
  if (stats.count() == 0) throw std::domain_error("bernstein bound of empty statistics");
  const double n = static_cast<double>(stats.count());
  const double log_term = std::log(3.0 / delta);
  return stats.mean() + std::sqrt(2.0 * stats.variance() * log_term / n) +
         3.0 * upper_bound * log_term / n;
}

}  // namespace agentsim::estimator
