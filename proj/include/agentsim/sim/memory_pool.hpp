#pragma once

#include <cstdint>
#include <map>

#include "agentsim/common.hpp"

namespace agentsim::sim {

struct MemoryConfig {
  std::uint64_t gpu_capacity_blocks = 4096;
  std::uint64_t block_size_tokens = 16;
  std::uint64_t dram_capacity_blocks = 0;  // 0 disables the offload tier
  double swap_bandwidth_blocks_per_s = 256.0;

  void validate() const;
};

enum class AllocOutcome { Ok, Insufficient };

/// Result of moving a program's blocks between tiers. When `evicted` is set the
/// offload tier could not take the blocks and they were dropped instead.
struct SwapResult {
  bool ok = false;
  bool evicted = false;
  std::uint64_t blocks = 0;
  SimTime completion = 0.0;
};

/// Two-tier KV block accounting keyed by program. A program's blocks live in
/// exactly one tier at a time. Transfers are non-blocking for compute but each
/// direction is a serial channel.
class MemoryPool {
 public:
  explicit MemoryPool(MemoryConfig config);

  const MemoryConfig& config() const { return config_; }

  std::uint64_t blocks_for(std::uint64_t tokens) const;

  /// Adds ceil(tokens / block_size) blocks to the program's GPU allocation.
  AllocOutcome alloc_blocks(ProgramIndex program, std::uint64_t tokens);
  /// Grows the program's GPU allocation so it covers `total_tokens`.
  AllocOutcome grow_to(ProgramIndex program, std::uint64_t total_tokens);
  /// Releases every GPU block of the program; returns how many.
  std::uint64_t free_blocks(ProgramIndex program);
  /// Drops the program's offloaded copy, if any.
  std::uint64_t drop_dram(ProgramIndex program);

  SwapResult swap_out(ProgramIndex program, SimTime now);
  SwapResult swap_in(ProgramIndex program, SimTime now);

  std::uint64_t gpu_blocks(ProgramIndex program) const;
  std::uint64_t dram_blocks(ProgramIndex program) const;
  std::uint64_t gpu_used() const { return gpu_used_; }
  std::uint64_t dram_used() const { return dram_used_; }
  std::uint64_t gpu_free() const { return config_.gpu_capacity_blocks - gpu_used_; }
  std::uint64_t dram_free() const { return config_.dram_capacity_blocks - dram_used_; }
  bool offload_enabled() const { return config_.dram_capacity_blocks > 0; }

  /// Seconds to move `blocks` across one channel, ignoring queueing.
  double transfer_seconds(std::uint64_t blocks) const;

  /// Throws InvariantViolation if either tier is over capacity or a program
  /// is resident in both tiers.
  void check_conservation() const;
  std::uint64_t conservation_checks() const { return checks_; }

 private:
  MemoryConfig config_;
  std::map<ProgramIndex, std::uint64_t> gpu_;
  std::map<ProgramIndex, std::uint64_t> dram_;
  std::map<ProgramIndex, SimTime> dram_ready_at_;
  std::uint64_t gpu_used_ = 0;
  std::uint64_t dram_used_ = 0;
  SimTime out_channel_free_ = 0.0;
  SimTime in_channel_free_ = 0.0;
  mutable std::uint64_t checks_ = 0;
};

}  // namespace agentsim::sim
