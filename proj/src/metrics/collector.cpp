#include "agentsim/metrics/collector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace agentsim::metrics {

Collector::Collector(const workload::Trace& trace) : trace_(trace) {
  outcomes_.resize(trace.size());
  active_.resize(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    outcomes_[i].program_id = trace[i].program_id;
    outcomes_[i].arrival_time = trace[i].arrival_time_s;
    outcomes_[i].turns = static_cast<std::uint32_t>(trace[i].turns.size());
  }
}

void Collector::tick(SimTime now) {
  if (now < last_time_) {
    throw InvariantViolation("metrics event at t=" + std::to_string(now) + " after t=" +
                             std::to_string(last_time_));
  }
  last_time_ = now;
}

void Collector::turn_arrived(ProgramIndex p, SimTime now) {
  tick(now);
  active_[p] = ActiveTurn{now, false, now, now, true};
}

void Collector::turn_admitted(ProgramIndex p, SimTime now, SimTime ready,
                              std::uint64_t uncached_tokens, std::uint64_t recomputed_tokens,
                              std::uint64_t swapped_in_blocks) {
  tick(now);
  ActiveTurn& t = active_[p];
  ProgramOutcome& o = outcomes_[p];
  if (!t.admitted) {
    o.total_bubble_s += now - t.arrival;
    o.swap_stall_s += ready - now;
    t.admitted = true;
  } else {
    o.preemption_stall_s += ready - t.preempted_at;
  }
  t.segment_start = ready;
  o.prefill_tokens += uncached_tokens;
  o.recomputed_prefill_tokens += recomputed_tokens;
  o.swapped_blocks_in += swapped_in_blocks;
}

void Collector::turn_preempted(ProgramIndex p, SimTime now) {
  tick(now);
  ActiveTurn& t = active_[p];
  ProgramOutcome& o = outcomes_[p];
  if (now >= t.segment_start) {
    o.busy_s += now - t.segment_start;
  } else {
    // Preempted while still waiting on its swap-in: give back the unspent stall.
    const double unspent = t.segment_start - now;
    (t.in_first_admission ? o.swap_stall_s : o.preemption_stall_s) -= unspent;
  }
  t.preempted_at = now;
  t.in_first_admission = false;
  ++o.preemptions;
}

void Collector::turn_finished(ProgramIndex p, SimTime now) {
  tick(now);
  ActiveTurn& t = active_[p];
  ProgramOutcome& o = outcomes_[p];
  o.busy_s += now - t.segment_start;
  ++o.turns_finished;
  turn_latencies_.push_back(now - t.arrival);
}

void Collector::kv_released(ProgramIndex p, SimTime now, std::uint64_t swapped_out_blocks,
                            bool recompute_required) {
  tick(now);
  outcomes_[p].swapped_blocks_out += swapped_out_blocks;
  if (recompute_required) ++outcomes_[p].evictions;
}

void Collector::program_completed(ProgramIndex p, SimTime now) {
  tick(now);
  ProgramOutcome& o = outcomes_[p];
  o.completed = true;
  o.completion_time = now;
  o.jct_s = now - o.arrival_time;
  o.tool_s = 0.0;
  for (const auto& turn : trace_[p].turns) o.tool_s += turn.tool_duration_s.value_or(0.0);
  const double parts = o.total_bubble_s + o.busy_s + o.tool_s + o.swap_stall_s + o.preemption_stall_s;
  if (std::abs(o.jct_s - parts) > 1e-9 * std::max(1.0, o.jct_s)) {
    throw InvariantViolation("accounting identity broken for " + o.program_id + ": jct " +
                             std::to_string(o.jct_s) + " != parts " + std::to_string(parts));
  }
}

void Collector::engine_busy(SimTime now, double seconds) {
  tick(now);
  engine_busy_s_ += seconds;
}

RunReport Collector::finalize() const {
  if (outcomes_.empty()) throw std::runtime_error("cannot report an empty run");
  RunReport r;
  r.programs = outcomes_;
  r.programs_total = outcomes_.size();
  std::vector<double> jcts;
  SimTime first_arrival = kNever;
  SimTime last_completion = 0.0;
  for (const auto& o : outcomes_) {
    first_arrival = std::min(first_arrival, o.arrival_time);
    r.recomputed_prefill_tokens += o.recomputed_prefill_tokens;
    r.swapped_blocks_in += o.swapped_blocks_in;
    r.swapped_blocks_out += o.swapped_blocks_out;
    r.total_bubble_s += o.total_bubble_s;
    if (!o.completed) continue;
    ++r.programs_completed;
    jcts.push_back(o.jct_s);
    last_completion = std::max(last_completion, o.completion_time);
  }
  r.incomplete = r.programs_completed != r.programs_total;
  r.mean_bubble_s = r.total_bubble_s / static_cast<double>(outcomes_.size());
  if (!jcts.empty()) {
    r.mean_jct_s = std::accumulate(jcts.begin(), jcts.end(), 0.0) / static_cast<double>(jcts.size());
    r.median_jct_s = median(jcts);
    r.p99_jct_s = percentile(jcts, 0.99);
    r.makespan_s = last_completion - first_arrival;
    r.throughput_jobs_per_s =
        r.makespan_s > 0.0 ? static_cast<double>(r.programs_completed) / r.makespan_s : 0.0;
  }
  if (!turn_latencies_.empty()) {
    r.mean_turn_latency_s = std::accumulate(turn_latencies_.begin(), turn_latencies_.end(), 0.0) /
                            static_cast<double>(turn_latencies_.size());
  }
  r.engine_busy_s = engine_busy_s_;
  return r;
}

}  // namespace agentsim::metrics
