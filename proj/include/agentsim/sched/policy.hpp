#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "agentsim/baselines/service_ledger.hpp"
#include "agentsim/estimator/tool_estimator.hpp"
#include "agentsim/sched/pin_table.hpp"
#include "agentsim/sched/request.hpp"
#include "agentsim/sim/memory_pool.hpp"

namespace agentsim::sched {

struct ProgramInfo {
  std::string label;
  SimTime arrival_time = 0.0;
  std::uint32_t num_turns = 0;
  std::uint64_t kv_tokens = 0;  // prefix covered by the program's blocks, any tier
  bool seen = false;
  SimTime last_finish = 0.0;
  std::string last_tool;
  bool complete = false;
};

/// Read-only state a policy may consult.
struct PolicyView {
  const estimator::ToolEstimator& estimator;
  const sim::MemoryPool& memory;
  const PinTable& pins;
  const baselines::ServiceLedger& service;
  const std::vector<ProgramInfo>& programs;
};

enum class Disposition { Evict, Swap, Pin };
const char* to_string(Disposition d);

/// What to do with a finished (non-final) turn's KV blocks.
struct FinishDecision {
  Disposition kind = Disposition::Evict;
  SimTime expiry = kNever;  // Pin only
  // Audit detail; meaning depends on the policy.
  std::string basis;
  double predicted_s = 0.0;
  double cost_s = 0.0;
};

/// Keep the blocks when the offload tier can take them, else drop them.
FinishDecision offload_or_evict(const PolicyView& view, ProgramIndex program);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  /// Priority of a waiting request; lower is scheduled first.
  virtual PriorityKey priority(const Request& r, const PolicyView& view) const = 0;
  /// Called when a non-final turn finishes. `next_tool` is the call that follows.
  virtual FinishDecision on_finish(const Request& r, const std::string& next_tool, SimTime now,
                                   const PolicyView& view) = 0;
};

}  // namespace agentsim::sched
