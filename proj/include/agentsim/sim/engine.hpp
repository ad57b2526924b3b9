#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agentsim/common.hpp"

namespace agentsim::sim {

/// Linear-in-tokens cost model with iteration-granularity continuous batching.
struct EngineConfig {
  double prefill_rate_tokens_per_s = 8000.0;
  double decode_time_per_iteration_s = 0.025;
  /// Extra decode seconds per decoding sequence in the batch. 0 keeps the
  /// iteration time flat in batch size.
  double decode_time_per_sequence_s = 0.0;
  std::uint32_t max_batch_requests = 64;
  std::uint64_t max_batch_tokens_per_iteration = 8192;
  bool chunked_prefill = true;
  /// Allow evicting a lower-priority running request for a waiting one.
  bool preemption = false;

  void validate() const;
};

/// What the engine needs to know about one batch member.
struct BatchSlot {
  RequestId request = 0;
  std::uint64_t prefill_remaining = 0;
  std::uint64_t decode_remaining = 0;
  bool gpu_resident = true;
};

struct SlotProgress {
  RequestId request = 0;
  std::uint64_t prefill_tokens = 0;
  bool decoded = false;   // emitted one token this iteration
  bool finished = false;  // last decode token emitted
};

struct IterationResult {
  double duration_s = 0.0;
  std::uint64_t prefill_tokens = 0;
  std::uint32_t decoding = 0;
  std::vector<SlotProgress> progress;  // same order as the batch
};

/// One engine iteration. Decoding members (no prefill left) emit a token each
/// and reserve one token of budget; prefill members consume uncached tokens
/// in batch order, chunked to the leftover token budget when chunked prefill
/// is on, or whole otherwise (the first prefill always runs so oversized
/// prompts cannot starve). Throws InvariantViolation on a non-resident slot
/// or a batch larger than max_batch_requests.
IterationResult engine_iteration(std::span<const BatchSlot> batch, const EngineConfig& config);

}  // namespace agentsim::sim
