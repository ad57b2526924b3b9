#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "agentsim/common.hpp"
#include "agentsim/estimator/stream_stats.hpp"

namespace agentsim::estimator {

struct EstimatorConfig {
  double delta = 0.05;               // bound holds with probability >= 1 - delta
  std::uint64_t per_tool_threshold = 5;
  double t_default_s = 10.0;
  double interval_upper_bound_s = 60.0;
  double alpha = 0.1;                // weight of the average-turns factor
  double ttl_max_s = 50.0;           // pin duration clamp
  double t_thresh_s = 2.0;           // simplified policy: pin iff mean below
  double t_pin_s = 5.0;              // simplified policy: fixed pin duration

  void validate() const;
  nlohmann::json to_json() const;
};

enum class BoundSource { Default, Global, PerTool };
const char* to_string(BoundSource source);

struct SelectedBound {
  double value = 0.0;
  BoundSource source = BoundSource::Default;
};

/// Running average of turns over completed programs plus per-program issued
/// request counts. The average starts at 1 until a program completes.
class TurnCounter {
 public:
  void on_request_issued(const std::string& program) { ++issued_[program]; }
  void on_program_complete(std::uint64_t turns);

  double avg_turns() const;
  std::uint64_t issued(const std::string& program) const;
  std::uint64_t completed_programs() const { return completed_; }

 private:
  std::map<std::string, std::uint64_t> issued_;
  std::uint64_t completed_ = 0;
  double turn_sum_ = 0.0;
};

/// Global and per-tool interval statistics and the TTL derived from them.
class ToolEstimator {
 public:
  explicit ToolEstimator(EstimatorConfig config = {});

  const EstimatorConfig& config() const { return config_; }

  /// Returns false (and counts a warning) for negative intervals.
  bool record_interval(const std::string& tool, double seconds);

  const StreamStats& global() const { return global_; }
  /// Empty stats for tools never seen.
  const StreamStats& per_tool(const std::string& tool) const;

  SelectedBound select_bound(const std::string& tool) const;
  /// Pin expiry: now + T_default^2 / bound * (1 + alpha * AvgTurns), clamped
  /// to now + ttl_max.
  SimTime calc_ttl(SimTime now, const std::string& tool) const;
  /// Fixed-threshold variant: pin for t_pin when the mean interval (per tool
  /// once it has enough samples, else global) is below t_thresh. Empty stats
  /// never pin.
  std::optional<double> simplified_decision(const std::string& tool) const;
  /// Mean interval used for cost predictions: per tool, then global, then
  /// T_default, following the same sample-count ladder as select_bound.
  double predicted_interval(const std::string& tool) const;

  TurnCounter& turns() { return turns_; }
  const TurnCounter& turns() const { return turns_; }
  std::uint64_t warnings() const { return warnings_; }

  /// Counts, means and deviations (global and per tool) for reports.
  nlohmann::json dump() const;

 private:
  EstimatorConfig config_;
  StreamStats global_;
  std::map<std::string, StreamStats> per_tool_;
  TurnCounter turns_;
  std::uint64_t warnings_ = 0;
};

}  // namespace agentsim::estimator
