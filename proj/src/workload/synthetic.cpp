#include "agentsim/workload/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace agentsim::workload {

std::vector<ToolSpec> default_tool_catalog() {
  return {
      {"cat", 3.0, Distribution(Uniform{0.05, 0.4})},
      {"sed", 2.0, Distribution(Uniform{0.05, 0.3})},
      {"ls", 2.0, Distribution(Constant{0.1})},
      {"grep", 2.0, Distribution(Uniform{0.1, 0.8})},
      {"python", 1.0, Distribution(LogNormal{0.0, 1.2})},
      {"pytest", 1.0, Distribution(LogNormal{1.5, 0.8})},
  };
}

void SyntheticParams::validate() const {
  if (num_programs < 1) throw ConfigError("num_programs must be >= 1");
  if (!(arrival_rate_jobs_per_s > 0.0) || !std::isfinite(arrival_rate_jobs_per_s)) {
    throw ConfigError("arrival_rate must be > 0");
  }
  if (max_turns < 1) throw ConfigError("max_turns must be >= 1");
  if (!(token_scale > 0.0)) throw ConfigError("token_scale must be > 0");
  if (tools.empty()) throw ConfigError("tool catalog must be non-empty");
  double total_weight = 0.0;
  for (const auto& t : tools) {
    if (t.name.empty()) throw ConfigError("tool name must be non-empty");
    if (!(t.weight >= 0.0)) throw ConfigError("tool '" + t.name + "' weight must be >= 0");
    total_weight += t.weight;
  }
  if (!(total_weight > 0.0)) throw ConfigError("tool weights must not all be zero");
}

namespace {

std::uint64_t scaled(double raw, double scale, std::uint64_t floor) {
  const double v = std::round(std::max(0.0, raw) * scale);
  return std::max<std::uint64_t>(floor, static_cast<std::uint64_t>(v));
}

}  // namespace

Trace generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(params.arrival_rate_jobs_per_s);
  std::vector<double> weights;
  for (const auto& t : params.tools) weights.push_back(t.weight);
  std::discrete_distribution<std::size_t> pick_tool(weights.begin(), weights.end());

  Trace trace;
  trace.reserve(params.num_programs);
  SimTime clock = 0.0;
  for (std::uint32_t i = 0; i < params.num_programs; ++i) {
    clock += gap(rng);
    ProgramSpec p;
    char id[32];
    std::snprintf(id, sizeof id, "prog-%05u", i);
    p.program_id = id;
    p.arrival_time_s = clock;

    const double raw_turns = std::round(params.turns.sample(rng));
    const auto n_turns = static_cast<std::uint32_t>(
        std::clamp(raw_turns, 1.0, static_cast<double>(params.max_turns)));
    std::uint64_t context = 0;
    for (std::uint32_t t = 0; t < n_turns; ++t) {
      TurnSpec turn;
      const Distribution& prompt = t == 0 ? params.first_prompt_tokens : params.new_prompt_tokens;
      turn.new_prompt_tokens = scaled(prompt.sample(rng), params.token_scale, 0);
      turn.decode_tokens = scaled(params.decode_tokens.sample(rng), params.token_scale, 1);
      const ToolSpec& tool = params.tools[pick_tool(rng)];
      const double duration = std::max(0.0, tool.duration.sample(rng));
      if (t == 0 && turn.tokens() > params.context_window) {
        turn.decode_tokens = std::min<std::uint64_t>(turn.decode_tokens, params.context_window / 2);
        turn.new_prompt_tokens = params.context_window - turn.decode_tokens;
      }
      if (context + turn.tokens() > params.context_window) break;
      context += turn.tokens();
      if (t + 1 < n_turns) {
        turn.tool_name = tool.name;
        turn.tool_duration_s = duration;
      }
      p.turns.push_back(std::move(turn));
    }
    // A truncated program ends on its last fitting turn.
    p.turns.back().tool_name.reset();
    p.turns.back().tool_duration_s.reset();
    trace.push_back(std::move(p));
  }
  return trace;
}

}  // namespace agentsim::workload
