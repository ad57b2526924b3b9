#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "agentsim/estimator/tool_estimator.hpp"
#include "agentsim/metrics/collector.hpp"
#include "agentsim/sched/scheduler.hpp"
#include "agentsim/sim/engine.hpp"
#include "agentsim/sim/event_queue.hpp"
#include "agentsim/sim/memory_pool.hpp"
#include "agentsim/workload/trace.hpp"

namespace agentsim {

struct SimulationConfig {
  std::string policy = "ttl";
  sim::EngineConfig engine;
  sim::MemoryConfig memory;
  estimator::EstimatorConfig estimator;
  sched::SchedulerOptions scheduler;

  void validate() const;
  nlohmann::json to_json() const;
};

/// One deterministic run of a trace under one policy. Owns all of its state,
/// so independent instances may run on different threads.
class Simulator {
 public:
  /// Throws ConfigError when the config is invalid or some program's peak
  /// context cannot fit in GPU memory at all.
  Simulator(workload::Trace trace, SimulationConfig config);

  /// Runs to completion. Callable once.
  metrics::RunReport run();

  const workload::Trace& trace() const { return trace_; }
  const sched::Scheduler& scheduler() const { return *scheduler_; }
  const sim::MemoryPool& memory() const { return memory_; }
  const estimator::ToolEstimator& estimator() const { return estimator_; }
  const metrics::Collector& collector() const { return collector_; }
  std::uint64_t events_processed() const { return events_processed_; }
  std::uint64_t iterations() const { return iterations_; }

 private:
  struct InFlight {
    std::vector<RequestId> ids;
    sim::IterationResult result;
  };

  void on_turn_arrival(ProgramIndex p, SimTime now);
  void on_iteration_end(SimTime now);
  void kick(SimTime now);

  workload::Trace trace_;
  SimulationConfig config_;
  sim::EventQueue events_;
  sim::MemoryPool memory_;
  estimator::ToolEstimator estimator_;
  std::unique_ptr<sched::Scheduler> scheduler_;
  metrics::Collector collector_;

  std::vector<std::uint32_t> next_turn_;
  std::vector<std::uint64_t> prefix_tokens_;
  RequestId next_request_id_ = 0;
  std::optional<InFlight> in_flight_;
  std::set<SimTime> pending_wakes_;
  std::uint64_t events_processed_ = 0;
  std::uint64_t iterations_ = 0;
  bool ran_ = false;
};

/// Convenience wrapper: build, run, and stamp the report with seed and trace hash.
metrics::RunReport simulate(const workload::Trace& trace, const SimulationConfig& config,
                            std::uint64_t seed = 0);

}  // namespace agentsim
