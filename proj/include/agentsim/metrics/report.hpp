#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "agentsim/common.hpp"

namespace agentsim::metrics {

struct ProgramOutcome {
  std::string program_id;
  SimTime arrival_time = 0.0;
  SimTime completion_time = 0.0;
  bool completed = false;
  std::uint32_t turns = 0;
  std::uint32_t turns_finished = 0;
  double jct_s = 0.0;
  double total_bubble_s = 0.0;
  double busy_s = 0.0;
  double tool_s = 0.0;
  double swap_stall_s = 0.0;
  double preemption_stall_s = 0.0;
  std::uint64_t prefill_tokens = 0;
  std::uint64_t recomputed_prefill_tokens = 0;
  std::uint64_t swapped_blocks_in = 0;
  std::uint64_t swapped_blocks_out = 0;
  std::uint32_t evictions = 0;  // finishes whose KV had to be dropped
  std::uint32_t preemptions = 0;

  nlohmann::json to_json() const;
};

struct RunReport {
  std::string policy;
  std::uint64_t seed = 0;
  double rate_multiplier = 1.0;
  std::uint32_t turn_scale = 1;
  std::string trace_hash;
  nlohmann::json config;  // every tunable that shaped the run

  std::uint64_t programs_total = 0;
  std::uint64_t programs_completed = 0;
  bool incomplete = false;

  double mean_jct_s = 0.0;
  double median_jct_s = 0.0;
  double p99_jct_s = 0.0;
  double mean_turn_latency_s = 0.0;
  double makespan_s = 0.0;
  double throughput_jobs_per_s = 0.0;
  double mean_bubble_s = 0.0;
  double total_bubble_s = 0.0;
  double engine_busy_s = 0.0;
  std::uint64_t recomputed_prefill_tokens = 0;
  std::uint64_t swapped_blocks_in = 0;
  std::uint64_t swapped_blocks_out = 0;

  nlohmann::json scheduler;  // pin lifecycle counters
  nlohmann::json estimator;  // interval statistics dump
  std::vector<ProgramOutcome> programs;

  nlohmann::json to_json() const;
  /// One row per program: program_id, arrival, completion, jct, bubble, turns.
  std::string programs_csv() const;
  /// "<policy>_r<rate>_k<scale>_s<seed>_<tracehash>"
  std::string file_stem() const;
};

/// Nearest-rank percentile of an unsorted sample; q in [0, 1].
double percentile(std::vector<double> values, double q);
double median(std::vector<double> values);

struct ComparisonRow {
  std::string policy;
  std::uint64_t seed = 0;
  double rate_multiplier = 1.0;
  std::uint32_t turn_scale = 1;
  double mean_jct_s = 0.0;
  double jct_speedup = 1.0;  // baseline mean JCT / this mean JCT
  double throughput_jobs_per_s = 0.0;
  double throughput_gain = 1.0;  // this / baseline
  double mean_bubble_s = 0.0;
  double bubble_reduction = 1.0;  // baseline / this (1 when both are 0)
};

/// Ratios of every report against `reports[baseline]`. Throws
/// std::invalid_argument when trace hashes differ.
std::vector<ComparisonRow> compare(const std::vector<RunReport>& reports, std::size_t baseline = 0);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace agentsim::metrics
