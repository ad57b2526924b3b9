#pragma once

#include <compare>
#include <cstdint>
#include <optional>

#include "agentsim/common.hpp"

namespace agentsim::sched {

enum class RequestState { Waiting, Running, Preempted, Finished };
const char* to_string(RequestState state);

/// One LLM turn inside the engine.
struct Request {
  RequestId id = 0;
  ProgramIndex program = 0;
  std::uint32_t turn_index = 0;
  bool last_turn = false;

  std::uint64_t total_context_tokens = 0;   // full prefix incl. this turn's prompt
  std::uint64_t cached_context_tokens = 0;  // KV already resident at admission
  std::uint64_t decode_tokens_total = 1;
  std::uint64_t decode_tokens_remaining = 1;
  std::uint64_t prefill_remaining = 0;

  RequestState state = RequestState::Waiting;
  bool was_preempted = false;  // re-queued after preemption; ranks first
  SimTime engine_arrival_time = 0.0;
  std::optional<SimTime> first_scheduled_time;
  SimTime ready_time = 0.0;  // swap-in completion of the current admission
  std::uint64_t sequence = 0;

  std::uint64_t generated_tokens() const { return decode_tokens_total - decode_tokens_remaining; }
  /// Tokens whose KV is on the GPU right now (only meaningful while running).
  std::uint64_t resident_tokens() const {
    return total_context_tokens + generated_tokens() - prefill_remaining;
  }
  /// Blocks-worth of tokens the request holds once it finishes decoding.
  std::uint64_t footprint_tokens() const { return total_context_tokens + decode_tokens_total; }
};

/// Lower sorts first. Policies fill the middle keys; the preempted rank is
/// always leading.
struct PriorityKey {
  int preempted_rank = 1;  // 0 = preempted
  double class_key = 0.0;  // pinned rank, attained service, ...
  double arrival_key = 0.0;
  std::uint64_t sequence = 0;

  auto operator<=>(const PriorityKey&) const = default;
};

}  // namespace agentsim::sched
