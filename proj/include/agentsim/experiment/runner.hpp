#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agentsim/experiment/config.hpp"
#include "agentsim/metrics/report.hpp"
#include "agentsim/sched/audit.hpp"

namespace agentsim::experiment {

struct RunSpec {
  std::string policy;
  double rate_multiplier = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t turn_scale = 1;
};

struct RunOutcome {
  RunSpec spec;
  std::optional<metrics::RunReport> report;
  std::vector<sched::AuditRecord> audit;
  std::string error;  // set when the run threw

  bool ok() const { return report && !report->incomplete; }
};

struct SweepResult {
  std::filesystem::path directory;
  std::vector<RunOutcome> runs;
  bool ok = false;
};

/// Cartesian product in a fixed order: policy, rate, seed, turn scale.
std::vector<RunSpec> plan_runs(const ExperimentConfig& cfg);

/// The trace for one run: loaded or synthesized for `seed`, then rate-scaled
/// and turn-scaled.
workload::Trace build_trace(const ExperimentConfig& cfg, const RunSpec& spec);

/// Never throws; failures land in `error`.
RunOutcome execute_run(const ExperimentConfig& cfg, const RunSpec& spec);

/// 16 hex chars identifying the effective config.
std::string config_hash(const ExperimentConfig& cfg);

/// Runs the sweep on `cfg.workers` threads and writes everything under
/// `<output_dir>/run-<config hash>/`. Progress lines go to `log` if given.
SweepResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

}  // namespace agentsim::experiment
