#pragma once

#include <memory>
#include <string>
#include <vector>

#include "agentsim/sched/policy.hpp"
#include "agentsim/sim/engine.hpp"

namespace agentsim::baselines {

using sched::FinishDecision;
using sched::PolicyView;
using sched::PriorityKey;
using sched::Request;

/// Vanilla engine: request arrival order, KV released (or offloaded) as soon
/// as a turn finishes.
class FcfsPolicy final : public sched::Policy {
 public:
  std::string_view name() const override { return "fcfs"; }
  PriorityKey priority(const Request& r, const PolicyView& view) const override;
  FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                           const PolicyView& view) override;
};

/// FCFS on program arrival instead of request arrival; still never pins.
class ProgramFcfsPolicy final : public sched::Policy {
 public:
  std::string_view name() const override { return "program-fcfs"; }
  PriorityKey priority(const Request& r, const PolicyView& view) const override;
  FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                           const PolicyView& view) override;
};

/// Program-level attained service: least cumulative engine time first.
class PlasPolicy final : public sched::Policy {
 public:
  std::string_view name() const override { return "plas"; }
  PriorityKey priority(const Request& r, const PolicyView& view) const override;
  FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                           const PolicyView& view) override;
};

struct InferceptCostModel {
  double swap_bandwidth_blocks_per_s = 1.0;
  double prefill_rate_tokens_per_s = 1.0;

  double swap_out_cost(std::uint64_t blocks) const {
    return static_cast<double>(blocks) / swap_bandwidth_blocks_per_s;
  }
  double swap_in_cost(std::uint64_t blocks) const {
    return static_cast<double>(blocks) / swap_bandwidth_blocks_per_s;
  }
  double recompute_cost(std::uint64_t tokens) const {
    return static_cast<double>(tokens) / prefill_rate_tokens_per_s;
  }
};

enum class InferceptAction { Preserve, Swap, Evict };

/// Preserve when the predicted tool time is below the swap round trip,
/// otherwise swap if DRAM has room, otherwise evict.
InferceptAction infercept_decision(double predicted_tool_s, std::uint64_t blocks,
                                   bool dram_has_room, const InferceptCostModel& cost);

/// Preserve/swap/evict per finished turn using mean tool-time predictions.
/// Preserved KV carries no TTL.
class InferceptPolicy final : public sched::Policy {
 public:
  explicit InferceptPolicy(InferceptCostModel cost) : cost_(cost) {}
  std::string_view name() const override { return "infercept"; }
  PriorityKey priority(const Request& r, const PolicyView& view) const override;
  FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                           const PolicyView& view) override;
  const InferceptCostModel& cost_model() const { return cost_; }

 private:
  InferceptCostModel cost_;
};

const std::vector<std::string>& policy_names();

/// Throws ConfigError listing valid names for an unknown label.
std::unique_ptr<sched::Policy> make_policy(const std::string& name,
                                           const sim::EngineConfig& engine,
                                           const sim::MemoryConfig& memory);

}  // namespace agentsim::baselines
