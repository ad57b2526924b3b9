#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agentsim/sched/audit.hpp"
#include "agentsim/sched/policy.hpp"
#include "agentsim/sched/waiting_queue.hpp"
#include "agentsim/sim/engine.hpp"

namespace agentsim::sched {

/// When the scheduler unpins victims for a request that does not fit.
enum class DeadlockTrigger {
  Idle,     // only when nothing is running, i.e. the engine would stall
  Blocked,  // whenever the best waiting request does not fit
};
const char* to_string(DeadlockTrigger t);
DeadlockTrigger parse_deadlock_trigger(const std::string& text);

struct SchedulerOptions {
  DeadlockTrigger deadlock_trigger = DeadlockTrigger::Idle;
  bool audit = true;
};

enum class DeadlockOutcome { FreedEnough, Impossible };

struct Admission {
  RequestId request = 0;
  std::uint64_t cached_tokens = 0;
  std::uint64_t uncached_tokens = 0;
  std::uint64_t swapped_in_blocks = 0;
  SimTime ready_time = 0.0;
};

struct Preemption {
  RequestId request = 0;
  bool swapped = false;
};

struct StepResult {
  std::vector<Admission> admitted;
  std::vector<Preemption> preempted;
};

struct FinishOutcome {
  std::optional<FinishDecision> decision;  // absent on the final turn
  bool swap_fell_back_to_evict = false;
  std::uint64_t swapped_out_blocks = 0;
  std::uint64_t freed_blocks = 0;
};

/// The engine-side scheduler: waiting queue, pin table with TTLs, admission
/// against KV memory, and victim selection. Policy-specific behaviour
/// (priority and what happens to a finished turn's blocks) is delegated.
class Scheduler {
 public:
  Scheduler(std::unique_ptr<Policy> policy, sim::MemoryPool& memory,
            estimator::ToolEstimator& estimator, const sim::EngineConfig& engine,
            SchedulerOptions options = {});

  void register_program(ProgramIndex program, std::string label, SimTime arrival,
                        std::uint32_t num_turns);

  /// Enqueues `r`. For a program seen before, records the interval since its
  /// previous turn finished against the tool that turn called.
  void on_request_arrive(Request r, SimTime now);

  /// Final turn: free the program's KV. Otherwise ask the policy whether to
  /// pin, swap, or evict. Also records the finish time for interval tracking.
  FinishOutcome on_request_finish(RequestId id, SimTime now, const std::string& next_tool);

  PriorityKey get_priority(const Request& r) const;
  std::size_t release_expired_pins(SimTime now);
  StepResult schedule_step(SimTime now);
  DeadlockOutcome resolve_deadlock(const Request& candidate, SimTime now);

  /// Blocks the candidate still needs on the GPU.
  std::uint64_t blocks_needed(const Request& r) const;

  void attribute_service(ProgramIndex program, double seconds) {
    service_.attribute(program, seconds);
  }

  const Request& request(RequestId id) const;
  Request& request(RequestId id);
  /// Every request seen so far, finished ones included.
  const std::map<RequestId, Request>& requests() const { return requests_; }
  const std::vector<RequestId>& running() const { return running_; }
  const WaitingQueue& waiting() const { return queue_; }
  const PinTable& pins() const { return pins_; }
  const Policy& policy() const { return *policy_; }
  const ProgramInfo& program(ProgramIndex p) const { return programs_.at(p); }
  const baselines::ServiceLedger& service() const { return service_; }
  const std::vector<AuditRecord>& audit_log() const { return audit_; }
  PolicyView view() const;

 private:
  void admit(Request& r, SimTime now, StepResult& step);
  bool try_preempt_for(const Request& candidate, SimTime now, StepResult& step,
                       const std::vector<RequestId>& admitted_this_step);
  /// Moves the program's GPU blocks to DRAM when room, else frees them.
  bool release_kv(ProgramIndex program, SimTime now);
  void log(SimTime t, std::string event, ProgramIndex program, std::uint64_t blocks = 0,
           SimTime expiry = kNever, std::string detail = {}, double predicted = 0.0,
           double cost = 0.0);

  std::unique_ptr<Policy> policy_;
  sim::MemoryPool& memory_;
  estimator::ToolEstimator& estimator_;
  sim::EngineConfig engine_;
  SchedulerOptions options_;

  std::vector<ProgramInfo> programs_;
  std::map<RequestId, Request> requests_;
  WaitingQueue queue_;
  std::vector<RequestId> running_;
  PinTable pins_;
  baselines::ServiceLedger service_;
  std::vector<AuditRecord> audit_;
};

}  // namespace agentsim::sched
