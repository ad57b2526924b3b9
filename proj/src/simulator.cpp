#include "agentsim/simulator.hpp"

#include <algorithm>
#include <limits>

#include "agentsim/baselines/policies.hpp"

namespace agentsim {

namespace {

constexpr ProgramIndex kIterationTag = std::numeric_limits<ProgramIndex>::max() - 1;
constexpr ProgramIndex kWakeTag = std::numeric_limits<ProgramIndex>::max();

}  // namespace

void SimulationConfig::validate() const {
  engine.validate();
  memory.validate();
  estimator.validate();
  const auto& names = baselines::policy_names();
  if (std::find(names.begin(), names.end(), policy) == names.end()) {
    baselines::make_policy(policy, engine, memory);  // throws with the valid list
  }
}

nlohmann::json SimulationConfig::to_json() const {
  return {
      {"policy", policy},
      {"engine",
       {{"prefill_rate", engine.prefill_rate_tokens_per_s},
        {"decode_time", engine.decode_time_per_iteration_s},
        {"decode_time_per_seq", engine.decode_time_per_sequence_s},
        {"max_batch_requests", engine.max_batch_requests},
        {"max_batch_tokens", engine.max_batch_tokens_per_iteration},
        {"chunked_prefill", engine.chunked_prefill},
        {"preemption", engine.preemption}}},
      {"memory",
       {{"gpu_blocks", memory.gpu_capacity_blocks},
        {"block_size", memory.block_size_tokens},
        {"dram_blocks", memory.dram_capacity_blocks},
        {"swap_bandwidth", memory.swap_bandwidth_blocks_per_s}}},
      {"estimator", estimator.to_json()},
      {"scheduler", {{"deadlock_trigger", sched::to_string(scheduler.deadlock_trigger)}}},
  };
}

Simulator::Simulator(workload::Trace trace, SimulationConfig config)
    : trace_(std::move(trace)),
      config_(std::move(config)),
      memory_(config_.memory),
      estimator_(config_.estimator),
      collector_(trace_) {
  config_.validate();
  if (trace_.size() >= kIterationTag) throw ConfigError("too many programs");
  scheduler_ = std::make_unique<sched::Scheduler>(
      baselines::make_policy(config_.policy, config_.engine, config_.memory), memory_, estimator_,
      config_.engine, config_.scheduler);
  for (ProgramIndex p = 0; p < trace_.size(); ++p) {
    const auto& spec = trace_[p];
    const std::uint64_t peak = memory_.blocks_for(spec.total_tokens());
    if (peak > config_.memory.gpu_capacity_blocks) {
      throw ConfigError("program " + spec.program_id + " needs " + std::to_string(peak) +
                        " KV blocks but the GPU holds " +
                        std::to_string(config_.memory.gpu_capacity_blocks));
    }
    scheduler_->register_program(p, spec.program_id, spec.arrival_time_s,
                                 static_cast<std::uint32_t>(spec.turns.size()));
  }
  next_turn_.assign(trace_.size(), 0);
  prefix_tokens_.assign(trace_.size(), 0);
}

void Simulator::on_turn_arrival(ProgramIndex p, SimTime now) {
  const auto& spec = trace_[p];
  const std::uint32_t k = next_turn_[p]++;
  const workload::TurnSpec& turn = spec.turns.at(k);
  sched::Request r;
  r.id = next_request_id_++;
  r.program = p;
  r.turn_index = k;
  r.last_turn = k + 1 == spec.turns.size();
  r.total_context_tokens = prefix_tokens_[p] + turn.new_prompt_tokens;
  r.decode_tokens_total = turn.decode_tokens;
  r.decode_tokens_remaining = turn.decode_tokens;
  r.engine_arrival_time = now;
  collector_.turn_arrived(p, now);
  scheduler_->on_request_arrive(std::move(r), now);
}

void Simulator::on_iteration_end(SimTime now) {
  if (!in_flight_) throw InvariantViolation("iteration end without an iteration in flight");
  InFlight done = std::move(*in_flight_);
  in_flight_.reset();
  const double dt = done.result.duration_s;
  collector_.engine_busy(now, dt);

  std::vector<RequestId> finished;
  for (const auto& prog : done.result.progress) {
    sched::Request& r = scheduler_->request(prog.request);
    r.prefill_remaining -= prog.prefill_tokens;
    if (prog.decoded) --r.decode_tokens_remaining;
    scheduler_->attribute_service(r.program, dt);
    if (prog.finished) finished.push_back(r.id);
  }

  for (RequestId id : finished) {
    const sched::Request& r = scheduler_->request(id);
    const ProgramIndex p = r.program;
    const workload::TurnSpec& turn = trace_[p].turns.at(r.turn_index);
    prefix_tokens_[p] = r.footprint_tokens();
    const bool last = r.last_turn;
    const sched::FinishOutcome out =
        scheduler_->on_request_finish(id, now, turn.tool_name.value_or(""));
    collector_.turn_finished(p, now);
    if (last) {
      collector_.program_completed(p, now);
      continue;
    }
    const bool dropped = out.decision && (out.decision->kind == sched::Disposition::Evict ||
                                          out.swap_fell_back_to_evict);
    collector_.kv_released(p, now, out.swapped_out_blocks, dropped);
    events_.push(now + turn.tool_duration_s.value_or(0.0), sim::EventKind::ToolCallComplete, p);
  }
}

void Simulator::kick(SimTime now) {
  if (in_flight_) return;
  const sched::StepResult step = scheduler_->schedule_step(now);
  for (const auto& pre : step.preempted) {
    collector_.turn_preempted(scheduler_->request(pre.request).program, now);
  }
  for (const auto& adm : step.admitted) {
    const sched::Request& r = scheduler_->request(adm.request);
    const workload::TurnSpec& turn = trace_[r.program].turns.at(r.turn_index);
    const std::uint64_t fresh = r.turn_index == 0 ? r.total_context_tokens : turn.new_prompt_tokens;
    const bool readmission = r.was_preempted;
    const std::uint64_t recomputed =
        readmission ? adm.uncached_tokens
                    : (adm.uncached_tokens > fresh ? adm.uncached_tokens - fresh : 0);
    collector_.turn_admitted(r.program, now, adm.ready_time, adm.uncached_tokens, recomputed,
                             adm.swapped_in_blocks);
  }

  std::vector<sim::BatchSlot> batch;
  SimTime earliest_ready = kNever;
  for (RequestId id : scheduler_->running()) {
    const sched::Request& r = scheduler_->request(id);
    if (r.ready_time > now) {
      earliest_ready = std::min(earliest_ready, r.ready_time);
      continue;
    }
    batch.push_back(sim::BatchSlot{id, r.prefill_remaining, r.decode_tokens_remaining,
                                   memory_.gpu_blocks(r.program) > 0});
  }
  if (batch.empty()) {
    if (earliest_ready < kNever) {
      if (pending_wakes_.insert(earliest_ready).second) {
        events_.push(earliest_ready, sim::EventKind::EngineIterationEnd, kWakeTag);
      }
    } else if (!scheduler_->waiting().empty()) {
      throw InvariantViolation("scheduler stalled with " +
                               std::to_string(scheduler_->waiting().size()) +
                               " waiting requests and nothing running");
    }
    return;
  }
  InFlight f;
  f.result = sim::engine_iteration(batch, config_.engine);
  for (const auto& s : batch) f.ids.push_back(s.request);
  events_.push(now + f.result.duration_s, sim::EventKind::EngineIterationEnd, kIterationTag);
  in_flight_ = std::move(f);
  ++iterations_;
}

metrics::RunReport Simulator::run() {
  if (ran_) throw InvariantViolation("Simulator::run called twice");
  ran_ = true;
  for (ProgramIndex p = 0; p < trace_.size(); ++p) {
    events_.push(trace_[p].arrival_time_s, sim::EventKind::ProgramArrival, p);
  }
  while (auto e = events_.advance()) {
    ++events_processed_;
    const SimTime now = e->time;
    switch (e->kind) {
      case sim::EventKind::ProgramArrival:
      case sim::EventKind::ToolCallComplete:
        on_turn_arrival(e->program, now);
        break;
      case sim::EventKind::EngineIterationEnd:
        if (e->program == kWakeTag) {
          pending_wakes_.erase(now);
        } else {
          on_iteration_end(now);
        }
        break;
    }
    memory_.check_conservation();
    if (!events_.next_time() || *events_.next_time() > now) {
      kick(now);
      memory_.check_conservation();
    }
  }

  metrics::RunReport report = collector_.finalize();
  report.policy = config_.policy;
  report.trace_hash = workload::trace_hash(trace_);
  report.config = config_.to_json();
  const sched::PinTable& pins = scheduler_->pins();
  report.scheduler = {
      {"pins_created", pins.pinned_total()},
      {"unpinned_expired", pins.removed(sched::UnpinReason::Expired)},
      {"unpinned_admitted", pins.removed(sched::UnpinReason::Admitted)},
      {"unpinned_victim", pins.removed(sched::UnpinReason::Victim)},
      {"unpinned_program_complete", pins.removed(sched::UnpinReason::ProgramComplete)},
      {"iterations", iterations_},
      {"events", events_processed_},
  };
  report.estimator = estimator_.dump();
  report.estimator["issued_requests"] = nlohmann::json::object();
  for (const auto& p : trace_) {
    report.estimator["issued_requests"][p.program_id] = estimator_.turns().issued(p.program_id);
  }
  return report;
}

metrics::RunReport simulate(const workload::Trace& trace, const SimulationConfig& config,
                            std::uint64_t seed) {
  Simulator sim(trace, config);
  metrics::RunReport r = sim.run();
  r.seed = seed;
  return r;
}

}  // namespace agentsim
