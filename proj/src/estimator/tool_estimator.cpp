#include "agentsim/estimator/tool_estimator.hpp"

#include <algorithm>
#include <cmath>

namespace agentsim::estimator {

void EstimatorConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("estimator.delta must lie in (0, 1)");
  if (per_tool_threshold < 1) throw ConfigError("estimator.per_tool_threshold must be >= 1");
  if (!(t_default_s > 0.0)) throw ConfigError("estimator.t_default must be > 0");
  if (!(interval_upper_bound_s > 0.0)) {
    throw ConfigError("estimator.interval_upper_bound must be > 0");
  }
  if (!(alpha >= 0.0)) throw ConfigError("estimator.alpha must be >= 0");
  if (!(ttl_max_s >= 0.0)) throw ConfigError("estimator.ttl_max must be >= 0");
  if (!(t_thresh_s >= 0.0)) throw ConfigError("estimator.t_thresh must be >= 0");
  if (!(t_pin_s >= 0.0)) throw ConfigError("estimator.t_pin must be >= 0");
}

nlohmann::json EstimatorConfig::to_json() const {
  return {{"delta", delta},
          {"per_tool_threshold", per_tool_threshold},
          {"t_default", t_default_s},
          {"interval_upper_bound", interval_upper_bound_s},
          {"alpha", alpha},
          {"ttl_max", ttl_max_s},
          {"t_thresh", t_thresh_s},
          {"t_pin", t_pin_s}};
}

const char* to_string(BoundSource source) {
  switch (source) {
    case BoundSource::Default: return "default";
    case BoundSource::Global: return "global";
    case BoundSource::PerTool: return "per_tool";
  }
  return "unknown";
}

void TurnCounter::on_program_complete(std::uint64_t turns) {
  ++completed_;
  turn_sum_ += static_cast<double>(turns);
}

double TurnCounter::avg_turns() const {
  if (completed_ == 0) return 1.0;
  return std::max(1.0, turn_sum_ / static_cast<double>(completed_));
}

std::uint64_t TurnCounter::issued(const std::string& program) const {
  auto it = issued_.find(program);
  return it == issued_.end() ? 0 : it->second;
}

ToolEstimator::ToolEstimator(EstimatorConfig config) : config_(config) { config_.validate(); }

bool ToolEstimator::record_interval(const std::string& tool, double seconds) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    ++warnings_;
    return false;
  }
  global_.add(seconds);
  per_tool_[tool].add(seconds);
  return true;
}

const StreamStats& ToolEstimator::per_tool(const std::string& tool) const {
  static const StreamStats kEmpty;
  auto it = per_tool_.find(tool);
  return it == per_tool_.end() ? kEmpty : it->second;
}

SelectedBound ToolEstimator::select_bound(const std::string& tool) const {
  const std::uint64_t n = config_.per_tool_threshold;
  if (global_.count() < n) return {config_.t_default_s, BoundSource::Default};
  const StreamStats& f = per_tool(tool);
  if (f.count() >= n) {
    return {bernstein_bound(f, config_.delta, config_.interval_upper_bound_s), BoundSource::PerTool};
  }
  return {bernstein_bound(global_, config_.delta, config_.interval_upper_bound_s),
          BoundSource::Global};
}

SimTime ToolEstimator::calc_ttl(SimTime now, const std::string& tool) const {
  const double bound = select_bound(tool).value;
  const double t_default = config_.t_default_s;
  const double ttl = t_default * t_default / bound * (1.0 + config_.alpha * turns_.avg_turns());
  return now + std::min(ttl, config_.ttl_max_s);
}

std::optional<double> ToolEstimator::simplified_decision(const std::string& tool) const {
  const StreamStats& f = per_tool(tool);
  const StreamStats& s = f.count() >= config_.per_tool_threshold ? f : global_;
  if (s.count() == 0) return std::nullopt;
  if (s.mean() < config_.t_thresh_s) return config_.t_pin_s;
  return std::nullopt;
}

double ToolEstimator::predicted_interval(const std::string& tool) const {
  const std::uint64_t n = config_.per_tool_threshold;
  const StreamStats& f = per_tool(tool);
  if (f.count() >= n) return f.mean();
  if (global_.count() >= n) return global_.mean();
  return config_.t_default_s;
}

nlohmann::json ToolEstimator::dump() const {
  auto stats_json = [](const StreamStats& s) {
    return nlohmann::json{{"count", s.count()}, {"mean", s.mean()}, {"std", s.stddev()}};
  };
  nlohmann::json tools = nlohmann::json::object();
  for (const auto& [name, s] : per_tool_) tools[name] = stats_json(s);
  return {{"global", stats_json(global_)},
          {"per_tool", std::move(tools)},
          {"avg_turns", turns_.avg_turns()},
          {"completed_programs", turns_.completed_programs()},
          {"negative_interval_warnings", warnings_}};
}

}  // namespace agentsim::estimator
