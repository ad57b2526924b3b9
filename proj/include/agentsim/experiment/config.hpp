#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agentsim/simulator.hpp"
#include "agentsim/workload/synthetic.hpp"

namespace agentsim::experiment {

enum class Severity { Info, Warn, Error };
const char* to_string(Severity s);

struct Diagnostic {
  Severity severity = Severity::Info;
  std::string key;
  std::string message;
};

struct ExperimentConfig {
  std::vector<std::string> policies{"fcfs", "ttl"};
  std::vector<double> rate_multipliers{1.0};
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::uint32_t> turn_scaling{1};
  std::string baseline = "fcfs";
  std::filesystem::path output_dir = "results";
  unsigned workers = 1;
  bool audit_log = false;

  std::optional<std::filesystem::path> trace_file;  // otherwise synthetic
  workload::SyntheticParams synthetic;

  SimulationConfig sim;  // `sim.policy` is overwritten per run

  /// Canonical key=value text of every effective setting, used for the copy
  /// in the output directory and the run-directory stamp.
  std::string effective_text() const;
};

/// Parses the INI text. Throws ConfigError on malformed values or unknown keys;
/// does not check that files exist.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Never throws: parse problems and invariant violations become error
/// diagnostics, omitted settings become info diagnostics with their default.
std::vector<Diagnostic> validate_config(const std::filesystem::path& path);
std::vector<Diagnostic> validate_config_text(const std::string& text,
                                             const std::filesystem::path& base_dir = ".");
/// Invariant checks on an already-parsed config (appends to `diags`).
void check_config(const ExperimentConfig& cfg, std::vector<Diagnostic>& diags);
bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace agentsim::experiment
