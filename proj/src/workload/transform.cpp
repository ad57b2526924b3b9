#include "agentsim/workload/transform.hpp"

#include <algorithm>

namespace agentsim::workload {

Trace turn_scaling_transform(const Trace& trace, std::uint32_t k) {
  if (k < 1) throw ConfigError("turn scaling factor must be >= 1");
  if (k == 1) return trace;
  auto shrink = [k](std::uint64_t n, std::uint64_t floor) {
    return std::max<std::uint64_t>(floor, n / k);
  };
  Trace out;
  out.reserve(trace.size());
  for (const auto& p : trace) {
    ProgramSpec q{p.program_id, p.arrival_time_s, {}};
    q.turns.reserve(p.turns.size() * k);
    for (std::uint32_t rep = 0; rep < k; ++rep) {
      for (std::size_t i = 0; i < p.turns.size(); ++i) {
        TurnSpec t = p.turns[i];
        t.new_prompt_tokens = t.new_prompt_tokens == 0 ? 0 : shrink(t.new_prompt_tokens, 1);
        t.decode_tokens = shrink(t.decode_tokens, 1);
        const bool joins_next_rep = i + 1 == p.turns.size() && rep + 1 < k;
        if (joins_next_rep) {
          if (p.turns.front().has_tool()) {
            t.tool_name = p.turns.front().tool_name;
            t.tool_duration_s = p.turns.front().tool_duration_s;
          } else {
            t.tool_name = "repeat";
            t.tool_duration_s = 0.0;
          }
        }
        q.turns.push_back(std::move(t));
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

Trace scale_arrival_rate(const Trace& trace, double multiplier) {
  if (!(multiplier > 0.0)) throw ConfigError("rate multiplier must be > 0");
  Trace out = trace;
  for (auto& p : out) p.arrival_time_s /= multiplier;
  return out;
}

}  // namespace agentsim::workload
