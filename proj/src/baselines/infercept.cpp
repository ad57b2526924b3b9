#include "agentsim/baselines/policies.hpp"

namespace agentsim::baselines {

InferceptAction infercept_decision(double predicted_tool_s, std::uint64_t blocks,
                                   bool dram_has_room, const InferceptCostModel& cost) {
  const double round_trip = cost.swap_out_cost(blocks) + cost.swap_in_cost(blocks);
  if (predicted_tool_s < round_trip) return InferceptAction::Preserve;
  return dram_has_room ? InferceptAction::Swap : InferceptAction::Evict;
}

PriorityKey InferceptPolicy::priority(const Request& r, const PolicyView&) const {
  // Preserve changes where the KV lives, not the engine's request order.
  PriorityKey k;
  k.arrival_key = r.engine_arrival_time;
  return k;
}

FinishDecision InferceptPolicy::on_finish(const Request& r, const std::string& next_tool,
                                          SimTime, const PolicyView& view) {
  const std::uint64_t blocks = view.memory.gpu_blocks(r.program);
  const bool room = view.memory.offload_enabled() && blocks <= view.memory.dram_free();
  const double predicted = view.estimator.predicted_interval(next_tool);
  FinishDecision d;
  d.predicted_s = predicted;
  d.cost_s = cost_.swap_out_cost(blocks) + cost_.swap_in_cost(blocks);
  switch (infercept_decision(predicted, blocks, room, cost_)) {
    case InferceptAction::Preserve:
      d.kind = sched::Disposition::Pin;
      d.expiry = kNever;
      d.basis = "preserve";
      break;
    case InferceptAction::Swap:
      d.kind = sched::Disposition::Swap;
      d.basis = "swap";
      break;
    case InferceptAction::Evict:
      d.kind = sched::Disposition::Evict;
      d.basis = "evict";
      break;
  }
  return d;
}

}  // namespace agentsim::baselines
