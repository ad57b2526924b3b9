#include "agentsim/sched/scheduler.hpp"

#include <algorithm>
#include <cmath>

namespace agentsim::sched {

const char* to_string(RequestState state) {
  switch (state) {
    case RequestState::Waiting: return "waiting";
    case RequestState::Running: return "running";
    case RequestState::Preempted: return "preempted";
    case RequestState::Finished: return "finished";
  }
  return "unknown";
}

const char* to_string(Disposition d) {
  switch (d) {
    case Disposition::Evict: return "evict";
    case Disposition::Swap: return "swap";
    case Disposition::Pin: return "pin";
  }
  return "unknown";
}

const char* to_string(DeadlockTrigger t) {
  return t == DeadlockTrigger::Idle ? "idle" : "blocked";
}

DeadlockTrigger parse_deadlock_trigger(const std::string& text) {
  if (text == "idle") return DeadlockTrigger::Idle;
  if (text == "blocked") return DeadlockTrigger::Blocked;
  throw ConfigError("deadlock_trigger must be 'idle' or 'blocked', got '" + text + "'");
}

FinishDecision offload_or_evict(const PolicyView& view, ProgramIndex program) {
  FinishDecision d;
  const std::uint64_t blocks = view.memory.gpu_blocks(program);
  if (view.memory.offload_enabled() && blocks <= view.memory.dram_free()) {
    d.kind = Disposition::Swap;
  } else {
    d.kind = Disposition::Evict;
  }
  return d;
}

nlohmann::json AuditRecord::to_json() const {
  nlohmann::json j = {{"time", time}, {"event", event}, {"program", program}, {"blocks", blocks}};
  if (std::isfinite(expiry)) j["expiry"] = expiry;
  if (!detail.empty()) j["detail"] = detail;
  if (predicted_s != 0.0) j["predicted_s"] = predicted_s;
  if (cost_s != 0.0) j["cost_s"] = cost_s;
  return j;
}

std::string audit_to_jsonl(const std::vector<AuditRecord>& log) {
  std::string out;
  for (const auto& r : log) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

Scheduler::Scheduler(std::unique_ptr<Policy> policy, sim::MemoryPool& memory,
                     estimator::ToolEstimator& estimator, const sim::EngineConfig& engine,
                     SchedulerOptions options)
    : policy_(std::move(policy)),
      memory_(memory),
      estimator_(estimator),
      engine_(engine),
      options_(options) {}

void Scheduler::register_program(ProgramIndex program, std::string label, SimTime arrival,
                                 std::uint32_t num_turns) {
  if (program != programs_.size()) {
    throw InvariantViolation("programs must be registered densely in index order");
  }
  ProgramInfo info;
  info.label = std::move(label);
  info.arrival_time = arrival;
  info.num_turns = num_turns;
  programs_.push_back(std::move(info));
}

PolicyView Scheduler::view() const {
  return PolicyView{estimator_, memory_, pins_, service_, programs_};
}

const Request& Scheduler::request(RequestId id) const {
  auto it = requests_.find(id);
  if (it == requests_.end()) throw InvariantViolation("unknown request " + std::to_string(id));
  return it->second;
}

Request& Scheduler::request(RequestId id) {
  auto it = requests_.find(id);
  if (it == requests_.end()) throw InvariantViolation("unknown request " + std::to_string(id));
  return it->second;
}

void Scheduler::log(SimTime t, std::string event, ProgramIndex program, std::uint64_t blocks,
                    SimTime expiry, std::string detail, double predicted, double cost) {
  if (!options_.audit) return;
  audit_.push_back(AuditRecord{t, std::move(event), programs_.at(program).label, blocks, expiry,
                               std::move(detail), predicted, cost});
}

void Scheduler::on_request_arrive(Request r, SimTime now) {
  if (requests_.count(r.id)) {
    throw InvariantViolation("duplicate request id " + std::to_string(r.id));
  }
  if (r.state != RequestState::Waiting) {
    throw InvariantViolation("arriving request must be waiting");
  }
  ProgramInfo& info = programs_.at(r.program);
  estimator_.turns().on_request_issued(info.label);
  if (info.seen) {
    estimator_.record_interval(info.last_tool, now - info.last_finish);
  }
  info.seen = true;
  r.sequence = r.id;
  const RequestId id = r.id;
  const ProgramIndex program = r.program;
  requests_.emplace(id, std::move(r));
  queue_.push(id, program);
}

FinishOutcome Scheduler::on_request_finish(RequestId id, SimTime now,
                                           const std::string& next_tool) {
  Request& r = request(id);
  if (r.state != RequestState::Running || r.decode_tokens_remaining != 0) {
    throw InvariantViolation("finish of request " + std::to_string(id) +
                             " that is not a completed running request");
  }
  running_.erase(std::find(running_.begin(), running_.end(), id));
  r.state = RequestState::Finished;

  const ProgramIndex p = r.program;
  ProgramInfo& info = programs_.at(p);
  info.kv_tokens = r.footprint_tokens();
  info.last_finish = now;
  info.last_tool = next_tool;

  FinishOutcome out;
  if (r.last_turn) {
    if (pins_.contains(p)) pins_.unpin(p, UnpinReason::ProgramComplete);
    out.freed_blocks = memory_.free_blocks(p) + memory_.drop_dram(p);
    info.kv_tokens = 0;
    info.complete = true;
    estimator_.turns().on_program_complete(info.num_turns);
    log(now, "free", p, out.freed_blocks, kNever, "program_complete");
    return out;
  }

  const PolicyView v = view();
  FinishDecision d = policy_->on_finish(r, next_tool, now, v);
  if (d.kind == Disposition::Pin && !(d.expiry > now)) {
    FinishDecision fallback = offload_or_evict(v, p);
    fallback.basis = d.basis + ";zero-ttl";
    d = fallback;
  }
  out.decision = d;
  const std::uint64_t blocks = memory_.gpu_blocks(p);
  switch (d.kind) {
    case Disposition::Pin:
      pins_.pin(PinEntry{p, d.expiry, blocks, info.arrival_time});
      log(now, "pin", p, blocks, d.expiry, d.basis, d.predicted_s, d.cost_s);
      break;
    case Disposition::Swap: {
      const sim::SwapResult s = memory_.swap_out(p, now);
      if (s.evicted) {
        info.kv_tokens = 0;
        out.swap_fell_back_to_evict = true;
        out.freed_blocks = s.blocks;
        log(now, "evict", p, s.blocks, kNever, d.basis + ";dram-full", d.predicted_s, d.cost_s);
      } else {
        out.swapped_out_blocks = s.blocks;
        log(now, "swap", p, s.blocks, kNever, d.basis, d.predicted_s, d.cost_s);
      }
      break;
    }
    case Disposition::Evict:
      out.freed_blocks = memory_.free_blocks(p);
      info.kv_tokens = 0;
      log(now, "evict", p, out.freed_blocks, kNever, d.basis, d.predicted_s, d.cost_s);
      break;
  }
  return out;
}

PriorityKey Scheduler::get_priority(const Request& r) const {
  PriorityKey k = policy_->priority(r, view());
  k.preempted_rank = r.state == RequestState::Preempted ? 0 : 1;
  k.sequence = r.sequence;
  return k;
}

bool Scheduler::release_kv(ProgramIndex program, SimTime now) {
  ProgramInfo& info = programs_.at(program);
  const std::uint64_t blocks = memory_.gpu_blocks(program);
  if (memory_.offload_enabled() && blocks <= memory_.dram_free() && blocks > 0) {
    memory_.swap_out(program, now);
    return true;
  }
  memory_.free_blocks(program);
  info.kv_tokens = 0;
  return false;
}

std::size_t Scheduler::release_expired_pins(SimTime now) {
  std::size_t released = 0;
  for (const PinEntry& e : pins_.entries()) {
    if (now > e.expiry && !queue_.contains_program(e.program)) {
      pins_.unpin(e.program, UnpinReason::Expired);
      const bool swapped = release_kv(e.program, now);
      log(now, "unpin", e.program, e.pinned_blocks, e.expiry, swapped ? "expired;swap" : "expired");
      ++released;
    }
  }
  return released;
}

std::uint64_t Scheduler::blocks_needed(const Request& r) const {
  const std::uint64_t want = memory_.blocks_for(r.footprint_tokens());
  const std::uint64_t have = memory_.gpu_blocks(r.program);
  return want > have ? want - have : 0;
}

DeadlockOutcome Scheduler::resolve_deadlock(const Request& candidate, SimTime now) {
  for (const PinEntry& victim : pins_.victim_order()) {
    if (blocks_needed(candidate) <= memory_.gpu_free()) break;
    if (victim.program == candidate.program) continue;
    pins_.unpin(victim.program, UnpinReason::Victim);
    const bool swapped = release_kv(victim.program, now);
    log(now, "victim", victim.program, victim.pinned_blocks, victim.expiry,
        std::string(swapped ? "swap" : "free") + ";for=" + programs_.at(candidate.program).label);
  }
  return blocks_needed(candidate) <= memory_.gpu_free() ? DeadlockOutcome::FreedEnough
                                                        : DeadlockOutcome::Impossible;
}

void Scheduler::admit(Request& r, SimTime now, StepResult& step) {
  const ProgramIndex p = r.program;
  ProgramInfo& info = programs_.at(p);
  queue_.erase(r.id);
  if (pins_.contains(p)) {
    const PinEntry e = pins_.unpin(p, UnpinReason::Admitted);
    log(now, "unpin", p, e.pinned_blocks, e.expiry, "admitted");
  }
  Admission a;
  a.request = r.id;
  a.ready_time = now;
  if (memory_.dram_blocks(p) > 0) {
    const sim::SwapResult s = memory_.swap_in(p, now);
    if (!s.ok) throw InvariantViolation("swap_in failed after fit check");
    a.ready_time = s.completion;
    a.swapped_in_blocks = s.blocks;
  }
  if (memory_.grow_to(p, r.footprint_tokens()) != sim::AllocOutcome::Ok) {
    throw InvariantViolation("allocation failed after fit check");
  }
  const std::uint64_t context_now = r.total_context_tokens + r.generated_tokens();
  const std::uint64_t cached = std::min(info.kv_tokens, context_now);
  r.cached_context_tokens = std::min(cached, r.total_context_tokens);
  r.prefill_remaining = context_now - cached;
  r.state = RequestState::Running;
  r.ready_time = a.ready_time;
  if (!r.first_scheduled_time) r.first_scheduled_time = now;
  a.cached_tokens = cached;
  a.uncached_tokens = r.prefill_remaining;
  running_.push_back(r.id);
  step.admitted.push_back(a);
}

bool Scheduler::try_preempt_for(const Request& candidate, SimTime now, StepResult& step,
                                const std::vector<RequestId>& admitted_this_step) {
  const PolicyView v = view();
  const PriorityKey cand = policy_->priority(candidate, v);
  auto tail = [](const PriorityKey& k, std::uint64_t seq) {
    return std::make_tuple(k.class_key, k.arrival_key, seq);
  };
  bool any = false;
  while (blocks_needed(candidate) > memory_.gpu_free()) {
    std::optional<RequestId> victim;
    std::tuple<double, double, std::uint64_t> worst{};
    for (RequestId id : running_) {
      if (std::find(admitted_this_step.begin(), admitted_this_step.end(), id) !=
          admitted_this_step.end()) {
        continue;
      }
      const Request& r = requests_.at(id);
      if (r.program == candidate.program) continue;
      auto key = tail(policy_->priority(r, v), r.sequence);
      if (!victim || key > worst) {
        victim = id;
        worst = key;
      }
    }
    if (!victim || !(worst > tail(cand, candidate.sequence))) break;
    Request& r = requests_.at(*victim);
    const std::uint64_t resident = r.resident_tokens();
    running_.erase(std::find(running_.begin(), running_.end(), r.id));
    r.state = RequestState::Preempted;
    r.was_preempted = true;
    const bool swapped = release_kv(r.program, now);
    programs_.at(r.program).kv_tokens = swapped ? resident : 0;
    queue_.push(r.id, r.program);
    log(now, "preempt", r.program, 0, kNever, swapped ? "swap" : "recompute");
    step.preempted.push_back(Preemption{r.id, swapped});
    any = true;
  }
  return any;
}

StepResult Scheduler::schedule_step(SimTime now) {
  StepResult step;
  std::vector<RequestId> admitted;
  release_expired_pins(now);
  while (!queue_.empty()) {
    if (running_.size() >= engine_.max_batch_requests) break;
    const auto best = queue_.best([this](RequestId id) { return get_priority(requests_.at(id)); });
    Request& cand = requests_.at(*best);
    if (blocks_needed(cand) > memory_.gpu_free()) {
      if (engine_.preemption) try_preempt_for(cand, now, step, admitted);
      if (blocks_needed(cand) > memory_.gpu_free()) {
        const bool stalled =
            options_.deadlock_trigger == DeadlockTrigger::Blocked || running_.empty();
        if (stalled && !pins_.empty()) resolve_deadlock(cand, now);
        if (blocks_needed(cand) > memory_.gpu_free()) break;
      }
    }
    admit(cand, now, step);
    admitted.push_back(cand.id);
  }
  return step;
}

}  // namespace agentsim::sched
