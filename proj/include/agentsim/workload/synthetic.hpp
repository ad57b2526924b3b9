#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agentsim/workload/distribution.hpp"
#include "agentsim/workload/trace.hpp"

namespace agentsim::workload {

struct ToolSpec {
  std::string name;
  double weight = 1.0;
  Distribution duration;
};

/// Short near-deterministic shell tools mixed with long-tailed test/run tools.
std::vector<ToolSpec> default_tool_catalog();

struct SyntheticParams {
  std::uint32_t num_programs = 50;
  double arrival_rate_jobs_per_s = 0.1;
  /// Turns per program, rounded and clamped to [1, max_turns].
  Distribution turns{LogNormal{2.0, 0.7}};
  std::uint32_t max_turns = 60;
  Distribution first_prompt_tokens{Geometric{2000}};
  Distribution new_prompt_tokens{Geometric{400}};
  Distribution decode_tokens{Geometric{150}};
  std::vector<ToolSpec> tools = default_tool_catalog();
  std::uint64_t context_window = kDefaultContextWindow;
  /// Uniform multiplier on every token count (decode floors at 1).
  double token_scale = 1.0;

  void validate() const;
};

/// Poisson arrivals at `arrival_rate_jobs_per_s`; everything else drawn from
/// the named distributions. Pure function of (params, seed). Programs that
/// would overflow the context window are truncated to their longest fitting
/// prefix of turns.
Trace generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

}  // namespace agentsim::workload
