#pragma once

#include "agentsim/sched/policy.hpp"

namespace agentsim::sched {

/// Pinning-aware order shared by both TTL variants: preempted first (set by
/// the scheduler), then programs holding a pin, then program arrival.
PriorityKey pinning_aware_priority(const Request& r, const PolicyView& view);

/// Pins every non-final turn until a confidence-bound derived TTL.
class TtlPolicy final : public Policy {
 public:
  std::string_view name() const override { return "ttl"; }
  PriorityKey priority(const Request& r, const PolicyView& view) const override {
    return pinning_aware_priority(r, view);
  }
  FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                           const PolicyView& view) override;
};

/// Pins for a fixed duration when the mean interval is below a threshold.
class SimplifiedTtlPolicy final : public Policy {
 public:
  std::string_view name() const override { return "ttl-simple"; }
  PriorityKey priority(const Request& r, const PolicyView& view) const override {
    return pinning_aware_priority(r, view);
  }
  FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                           const PolicyView& view) override;
};

}  // namespace agentsim::sched
