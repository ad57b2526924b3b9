#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agentsim/common.hpp"
#include "agentsim/metrics/report.hpp"
#include "agentsim/workload/trace.hpp"

namespace agentsim::metrics {

/// Event-sourced per-program accounting. Every call carries the current
/// simulated time, which must never decrease; each call is O(1).
class Collector {
 public:
  explicit Collector(const workload::Trace& trace);

  void turn_arrived(ProgramIndex p, SimTime now);
  /// `ready` is when the KV became usable (later than `now` after a swap-in).
  void turn_admitted(ProgramIndex p, SimTime now, SimTime ready, std::uint64_t uncached_tokens,
                     std::uint64_t recomputed_tokens, std::uint64_t swapped_in_blocks);
  void turn_preempted(ProgramIndex p, SimTime now);
  void turn_finished(ProgramIndex p, SimTime now);
  void kv_released(ProgramIndex p, SimTime now, std::uint64_t swapped_out_blocks,
                   bool recompute_required);
  /// Checks the per-program time accounting identity; throws on mismatch.
  void program_completed(ProgramIndex p, SimTime now);
  void engine_busy(SimTime now, double seconds);

  double engine_busy_s() const { return engine_busy_s_; }
  const std::vector<ProgramOutcome>& outcomes() const { return outcomes_; }

  /// Throws std::runtime_error for an empty run. Unfinished programs set
  /// `incomplete` on the report.
  RunReport finalize() const;

 private:
  struct ActiveTurn {
    SimTime arrival = 0.0;
    bool admitted = false;
    SimTime segment_start = 0.0;  // ready time of the current admission
    SimTime preempted_at = 0.0;
    bool in_first_admission = true;
  };

  void tick(SimTime now);

  const workload::Trace& trace_;
  std::vector<ProgramOutcome> outcomes_;
  std::vector<ActiveTurn> active_;
  std::vector<double> turn_latencies_;
  double engine_busy_s_ = 0.0;
  SimTime last_time_ = 0.0;
};

}  // namespace agentsim::metrics
