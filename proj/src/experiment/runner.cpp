#include "agentsim/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "agentsim/simulator.hpp"
#include "agentsim/workload/transform.hpp"

namespace agentsim::experiment {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Offered load in jobs/s: programs over the span of their arrivals.
double offered_rate(const workload::Trace& trace) {
  if (trace.size() < 2) return 0.0;
  const double span = trace.back().arrival_time_s - trace.front().arrival_time_s;
  return span > 0.0 ? static_cast<double>(trace.size() - 1) / span : 0.0;
}

}  // namespace

std::vector<RunSpec> plan_runs(const ExperimentConfig& cfg) {
  std::vector<RunSpec> plan;
  for (const auto& p : cfg.policies) {
    for (double r : cfg.rate_multipliers) {
      for (auto s : cfg.seeds) {
        for (auto k : cfg.turn_scaling) plan.push_back({p, r, s, k});
      }
    }
  }
  return plan;
}

workload::Trace build_trace(const ExperimentConfig& cfg, const RunSpec& spec) {
  workload::Trace base = cfg.trace_file
                             ? workload::load_trace(*cfg.trace_file, cfg.synthetic.context_window)
                             : workload::generate_synthetic(cfg.synthetic, spec.seed);
  return workload::turn_scaling_transform(
      workload::scale_arrival_rate(base, spec.rate_multiplier), spec.turn_scale);
}

RunOutcome execute_run(const ExperimentConfig& cfg, const RunSpec& spec) {
  RunOutcome out;
  out.spec = spec;
  try {
    SimulationConfig sc = cfg.sim;
    sc.policy = spec.policy;
    sc.scheduler.audit = cfg.audit_log;
    Simulator sim(build_trace(cfg, spec), sc);
    metrics::RunReport r = sim.run();
    r.seed = spec.seed;
    r.rate_multiplier = spec.rate_multiplier;
    r.turn_scale = spec.turn_scale;
    r.config["offered_jobs_per_s"] = offered_rate(sim.trace());
    if (cfg.audit_log) out.audit = sim.scheduler().audit_log();
    out.report = std::move(r);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Where results go and how many threads produce them do not change them.
  ExperimentConfig stamp = cfg;
  stamp.output_dir = ExperimentConfig{}.output_dir;
  stamp.workers = ExperimentConfig{}.workers;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : stamp.effective_text()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SweepResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  SweepResult result;
  const std::vector<RunSpec> plan = plan_runs(cfg);
  result.runs.resize(plan.size());

  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      result.runs[i] = execute_run(cfg, plan[i]);
      if (log) {
        std::lock_guard lock(log_mu);
        const auto& o = result.runs[i];
        *log << (o.ok() ? "done " : "FAIL ") << o.spec.policy << " rate=" << num(o.spec.rate_multiplier)
             << " seed=" << o.spec.seed << " k=" << o.spec.turn_scale;
        if (o.report) *log << " mean_jct=" << num(o.report->mean_jct_s);
        if (!o.error.empty()) *log << " error: " << o.error;
        *log << "\n";
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(cfg.workers, plan.size()));
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  result.directory = cfg.output_dir / ("run-" + config_hash(cfg));
  fs::create_directories(result.directory / "reports");
  if (cfg.audit_log) fs::create_directories(result.directory / "audit");
  write_file(result.directory / "effective_config.ini", cfg.effective_text());

  std::string failures;
  std::map<std::string, std::string> trace_hashes;  // "seed k rate" -> hash
  for (const auto& o : result.runs) {
    if (!o.ok()) {
      failures += o.spec.policy + " rate=" + num(o.spec.rate_multiplier) +
                  " seed=" + std::to_string(o.spec.seed) + " k=" + std::to_string(o.spec.turn_scale) +
                  ": " + (o.error.empty() ? "incomplete" : o.error) + "\n";
    }
    if (!o.report) continue;
    const auto& r = *o.report;
    const std::string stem = r.file_stem();
    write_file(result.directory / "reports" / (stem + ".json"), r.to_json().dump(2) + "\n");
    write_file(result.directory / "reports" / (stem + "_programs.csv"), r.programs_csv());
    if (cfg.audit_log) {
      write_file(result.directory / "audit" / (stem + ".jsonl"), sched::audit_to_jsonl(o.audit));
    }
    trace_hashes["seed=" + std::to_string(r.seed) + " k=" + std::to_string(r.turn_scale) +
                 " rate=" + num(r.rate_multiplier)] = r.trace_hash;
  }
  std::string hashes;
  for (const auto& [key, h] : trace_hashes) hashes += key + " " + h + "\n";
  write_file(result.directory / "trace_hash.txt", hashes);

  // Comparison against the baseline within each (rate, seed, k) group.
  using GroupKey = std::tuple<double, std::uint64_t, std::uint32_t>;
  std::map<GroupKey, std::vector<metrics::RunReport>> groups;
  for (const auto& o : result.runs) {
    if (o.report) groups[{o.spec.rate_multiplier, o.spec.seed, o.spec.turn_scale}].push_back(*o.report);
  }
  std::vector<metrics::ComparisonRow> rows;
  for (auto& [key, reports] : groups) {
    std::size_t base = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (reports[i].policy == cfg.baseline) base = i;
    }
    auto part = metrics::compare(reports, base);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  write_file(result.directory / "comparison.csv", metrics::comparison_csv(rows));

  // Plot series, averaged over seeds.
  struct Acc {
    double jct = 0.0, thr = 0.0, load = 0.0;
    int n = 0;
  };
  std::map<std::tuple<std::string, double, std::uint32_t>, Acc> acc;
  std::string bubbles = "policy,rate_multiplier,seed,turn_scale,program_id,bubble_s,jct_s\n";
  for (const auto& o : result.runs) {
    if (!o.report) continue;
    const auto& r = *o.report;
    Acc& a = acc[{r.policy, r.rate_multiplier, r.turn_scale}];
    a.jct += r.mean_jct_s;
    a.thr += r.throughput_jobs_per_s;
    a.load += r.config.value("offered_jobs_per_s", 0.0);
    ++a.n;
    for (const auto& p : r.programs) {
      bubbles += r.policy + "," + num(r.rate_multiplier) + "," + std::to_string(r.seed) + "," +
                 std::to_string(r.turn_scale) + "," + p.program_id + "," + num(p.total_bubble_s) +
                 "," + num(p.jct_s) + "\n";
    }
  }
  std::string jct = "policy,turn_scale,rate_multiplier,jobs_per_s,mean_jct_s\n";
  std::string thr = "policy,turn_scale,rate_multiplier,jobs_per_s,throughput_jobs_per_s\n";
  std::string scaling = "policy,rate_multiplier,turn_scale,mean_jct_s\n";
  for (const auto& [key, a] : acc) {
    const auto& [policy, rate, k] = key;
    const double n = a.n;
    const std::string head = policy + "," + std::to_string(k) + "," + num(rate) + "," + num(a.load / n);
    jct += head + "," + num(a.jct / n) + "\n";
    thr += head + "," + num(a.thr / n) + "\n";
    scaling += policy + "," + num(rate) + "," + std::to_string(k) + "," + num(a.jct / n) + "\n";
  }
  write_file(result.directory / "plot_jct_vs_rate.csv", jct);
  write_file(result.directory / "plot_throughput_vs_rate.csv", thr);
  write_file(result.directory / "plot_bubbles.csv", bubbles);
  write_file(result.directory / "plot_turn_scaling.csv", scaling);

  const fs::path marker = result.directory / "INCOMPLETE";
  if (failures.empty()) {
    fs::remove(marker);
  } else {
    write_file(marker, failures);
  }
  result.ok = failures.empty();
  return result;
}

}  // namespace agentsim::experiment
