// agentsim: run or validate a scheduling experiment described by an INI config.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "agentsim/experiment/config.hpp"
#include "agentsim/experiment/runner.hpp"

using namespace agentsim;

namespace {

struct Overrides {
  std::vector<std::string> policies;
  std::vector<double> rates;
  std::vector<std::uint64_t> seeds;
  std::string out;
  unsigned workers = 0;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--policy", o.policies, "Policies to run (repeatable)");
  cmd->add_option("--rate-mult", o.rates, "Arrival-rate multipliers (repeatable)");
  cmd->add_option("--seed", o.seeds, "Seeds (repeatable)");
  cmd->add_option("--out", o.out, "Output directory (default: config, then $AGENTSIM_OUT)");
  cmd->add_option("--workers", o.workers, "Parallel runs");
}

void apply(experiment::ExperimentConfig& cfg, const Overrides& o, bool out_in_config) {
  if (!o.policies.empty()) cfg.policies = o.policies;
  if (!o.rates.empty()) cfg.rate_multipliers = o.rates;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.workers) cfg.workers = o.workers;
  if (!o.out.empty()) {
    cfg.output_dir = o.out;
  } else if (!out_in_config) {
    if (const char* env = std::getenv("AGENTSIM_OUT"); env && *env) cfg.output_dir = env;
  }
}

bool config_sets_output(const std::vector<experiment::Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.key == "experiment.output_dir") return d.severity != experiment::Severity::Info;
  }
  return true;
}

void print(const std::vector<experiment::Diagnostic>& diags, bool verbose) {
  for (const auto& d : diags) {
    if (!verbose && d.severity == experiment::Severity::Info) continue;
    std::cout << experiment::to_string(d.severity) << "  " << d.key << ": " << d.message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for multi-turn agent serving"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides over;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run every (policy, rate, seed, turn scale) combination");
  run->add_option("config", config_path, "INI config")->required()->check(CLI::ExistingFile);
  run->add_flag("-q,--quiet", quiet, "No per-run progress");
  add_overrides(run, over);

  auto* validate = app.add_subcommand("validate", "Check a config and print effective defaults");
  validate->add_option("config", config_path, "INI config")->required();
  add_overrides(validate, over);

  CLI11_PARSE(app, argc, argv);

  try {
    auto diags = experiment::validate_config(config_path);
    const bool out_in_config = config_sets_output(diags);
    if (experiment::has_errors(diags)) {
      print(diags, validate->parsed());
      return 2;
    }
    auto cfg = experiment::load_config(config_path);
    apply(cfg, over, out_in_config);
    std::vector<experiment::Diagnostic> post;
    experiment::check_config(cfg, post);
    if (validate->parsed()) {
      print(diags, true);
      print(post, true);
      std::cout << "\n# effective config\n" << cfg.effective_text();
      return experiment::has_errors(post) ? 2 : 0;
    }
    if (experiment::has_errors(post)) {
      print(post, false);
      return 2;
    }
    const auto result = experiment::run_experiment(cfg, quiet ? nullptr : &std::cerr);
    std::cout << result.directory.string() << "\n";
    if (!result.ok) {
      std::cerr << "some runs failed; see " << (result.directory / "INCOMPLETE").string() << "\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
