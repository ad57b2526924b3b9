#pragma once

#include <cstdint>

namespace agentsim::estimator {

/// Online count / mean / sum of squared deviations (Welford). The standard
/// deviation is the sample one, and 0 for fewer than two observations.
class StreamStats {
 public:
  void add(double x);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double variance() const;
  double stddev() const;

  static StreamStats from_moments(std::uint64_t count, double mean, double stddev);

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// High-probability upper bound on the true mean of a variable bounded by
/// `upper_bound` (empirical Bernstein):
///   mean + sqrt(2 var ln(3/delta) / n) + 3 b ln(3/delta) / n.
/// Throws std::domain_error when the stats are empty.
double bernstein_bound(const StreamStats& stats, double delta, double upper_bound);

}  // namespace agentsim::estimator
