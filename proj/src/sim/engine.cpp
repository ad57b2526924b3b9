#include "agentsim/sim/engine.hpp"

#include <algorithm>
#include <string>

namespace agentsim::sim {

void EngineConfig::validate() const {
  if (!(prefill_rate_tokens_per_s > 0.0)) throw ConfigError("engine.prefill_rate must be > 0");
  if (!(decode_time_per_iteration_s > 0.0)) throw ConfigError("engine.decode_time must be > 0");
  if (decode_time_per_sequence_s < 0.0) {
    throw ConfigError("engine.decode_time_per_seq must be >= 0");
  }
  if (max_batch_requests < 1) throw ConfigError("engine.max_batch_requests must be >= 1");
  if (max_batch_tokens_per_iteration < 1) {
    throw ConfigError("engine.max_batch_tokens must be >= 1");
  }
}

IterationResult engine_iteration(std::span<const BatchSlot> batch, const EngineConfig& config) {
  if (batch.size() > config.max_batch_requests) {
    throw InvariantViolation("batch of " + std::to_string(batch.size()) +
                             " exceeds max_batch_requests");
  }
  IterationResult out;
  out.progress.reserve(batch.size());

  std::uint64_t budget = config.max_batch_tokens_per_iteration;
  for (const auto& slot : batch) {
    if (!slot.gpu_resident) {
      throw InvariantViolation("request " + std::to_string(slot.request) +
                               " scheduled without GPU residency");
    }
    if (slot.prefill_remaining == 0 && slot.decode_remaining > 0) {
      ++out.decoding;
      budget = budget > 0 ? budget - 1 : 0;
    }
  }

  bool any_prefill = false;
  for (const auto& slot : batch) {
    SlotProgress p{slot.request, 0, false, false};
    if (slot.prefill_remaining == 0) {
      if (slot.decode_remaining > 0) {
        p.decoded = true;
        p.finished = slot.decode_remaining == 1;
      }
    } else if (config.chunked_prefill) {
      p.prefill_tokens = std::min(slot.prefill_remaining, budget);
      budget -= p.prefill_tokens;
    } else if (!any_prefill || slot.prefill_remaining <= budget) {
      p.prefill_tokens = slot.prefill_remaining;
      budget -= std::min(budget, p.prefill_tokens);
    }
    if (p.prefill_tokens > 0) any_prefill = true;
    out.prefill_tokens += p.prefill_tokens;
    out.progress.push_back(p);
  }

  out.duration_s = static_cast<double>(out.prefill_tokens) / config.prefill_rate_tokens_per_s;
  if (out.decoding > 0) {
    out.duration_s += config.decode_time_per_iteration_s +
                      config.decode_time_per_sequence_s * static_cast<double>(out.decoding);
  }
  return out;
}

}  // namespace agentsim::sim
