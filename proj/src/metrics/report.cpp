#include "agentsim/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace agentsim::metrics {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

nlohmann::json ProgramOutcome::to_json() const {
  return {{"program_id", program_id},
          {"arrival", arrival_time},
          {"completion", completion_time},
          {"completed", completed},
          {"turns", turns},
          {"turns_finished", turns_finished},
          {"jct", jct_s},
          {"bubble", total_bubble_s},
          {"busy", busy_s},
          {"tool", tool_s},
          {"swap_stall", swap_stall_s},
          {"preemption_stall", preemption_stall_s},
          {"prefill_tokens", prefill_tokens},
          {"recomputed_prefill_tokens", recomputed_prefill_tokens},
          {"swapped_blocks_in", swapped_blocks_in},
          {"swapped_blocks_out", swapped_blocks_out},
          {"evictions", evictions},
          {"preemptions", preemptions}};
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json progs = nlohmann::json::array();
  for (const auto& p : programs) progs.push_back(p.to_json());
  return {{"policy", policy},
          {"seed", seed},
          {"rate_multiplier", rate_multiplier},
          {"turn_scale", turn_scale},
          {"trace_hash", trace_hash},
          {"config", config},
          {"programs_total", programs_total},
          {"programs_completed", programs_completed},
          {"incomplete", incomplete},
          {"mean_jct", mean_jct_s},
          {"median_jct", median_jct_s},
          {"p99_jct", p99_jct_s},
          {"mean_turn_latency", mean_turn_latency_s},
          {"makespan", makespan_s},
          {"throughput_jobs_per_s", throughput_jobs_per_s},
          {"mean_bubble", mean_bubble_s},
          {"total_bubble", total_bubble_s},
          {"engine_busy", engine_busy_s},
          {"recomputed_prefill_tokens", recomputed_prefill_tokens},
          {"swapped_blocks_in", swapped_blocks_in},
          {"swapped_blocks_out", swapped_blocks_out},
          {"scheduler", scheduler},
          {"estimator", estimator},
          {"programs", std::move(progs)}};
}

std::string RunReport::programs_csv() const {
  std::string out = "program_id,arrival,completion,jct,bubble,turns\n";
  for (const auto& p : programs) {
    out += p.program_id + "," + num(p.arrival_time) + "," + num(p.completion_time) + "," +
           num(p.jct_s) + "," + num(p.total_bubble_s) + "," + std::to_string(p.turns) + "\n";
  }
  return out;
}

std::string RunReport::file_stem() const {
  return policy + "_r" + num(rate_multiplier) + "_k" + std::to_string(turn_scale) + "_s" +
         std::to_string(seed) + "_" + trace_hash;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<ComparisonRow> compare(const std::vector<RunReport>& reports, std::size_t baseline) {
  if (baseline >= reports.size()) throw std::invalid_argument("baseline index out of range");
  const RunReport& base = reports[baseline];
  std::vector<ComparisonRow> rows;
  for (const auto& r : reports) {
    if (r.trace_hash != base.trace_hash) {
      throw std::invalid_argument("trace hash mismatch: " + r.trace_hash + " vs " + base.trace_hash);
    }
    ComparisonRow row;
    row.policy = r.policy;
    row.seed = r.seed;
    row.rate_multiplier = r.rate_multiplier;
    row.turn_scale = r.turn_scale;
    row.mean_jct_s = r.mean_jct_s;
    row.jct_speedup = r.mean_jct_s > 0.0 ? base.mean_jct_s / r.mean_jct_s : 1.0;
    row.throughput_jobs_per_s = r.throughput_jobs_per_s;
    row.throughput_gain =
        base.throughput_jobs_per_s > 0.0 ? r.throughput_jobs_per_s / base.throughput_jobs_per_s : 1.0;
    row.mean_bubble_s = r.mean_bubble_s;
    if (r.mean_bubble_s > 0.0) {
      row.bubble_reduction = base.mean_bubble_s / r.mean_bubble_s;
    } else {
      row.bubble_reduction = base.mean_bubble_s > 0.0 ? INFINITY : 1.0;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out =
      "policy,rate_multiplier,turn_scale,seed,mean_jct,jct_speedup,throughput,throughput_gain,"
      "mean_bubble,bubble_reduction\n";
  for (const auto& r : rows) {
    out += r.policy + "," + num(r.rate_multiplier) + "," + std::to_string(r.turn_scale) + "," +
           std::to_string(r.seed) + "," + num(r.mean_jct_s) + "," + num(r.jct_speedup) + "," +
           num(r.throughput_jobs_per_s) + "," + num(r.throughput_gain) + "," +
           num(r.mean_bubble_s) + "," + num(r.bubble_reduction) + "\n";
  }
  return out;
}

}  // namespace agentsim::metrics
