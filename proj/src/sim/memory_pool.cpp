#include "agentsim/sim/memory_pool.hpp"

#include <algorithm>
#include <string>

namespace agentsim::sim {

void MemoryConfig::validate() const {
  if (gpu_capacity_blocks == 0) throw ConfigError("memory.gpu_blocks must be >= 1");
  if (block_size_tokens == 0) throw ConfigError("memory.block_size must be >= 1");
  if (!(swap_bandwidth_blocks_per_s > 0.0)) {
    throw ConfigError("memory.swap_bandwidth must be > 0");
  }
}

MemoryPool::MemoryPool(MemoryConfig config) : config_(config) { config_.validate(); }

std::uint64_t MemoryPool::blocks_for(std::uint64_t tokens) const {
  return (tokens + config_.block_size_tokens - 1) / config_.block_size_tokens;
}

AllocOutcome MemoryPool::alloc_blocks(ProgramIndex program, std::uint64_t tokens) {
  const std::uint64_t blocks = blocks_for(tokens);
  if (blocks > gpu_free()) return AllocOutcome::Insufficient;
  if (blocks == 0) return AllocOutcome::Ok;
  gpu_[program] += blocks;
  gpu_used_ += blocks;
  return AllocOutcome::Ok;
}

AllocOutcome MemoryPool::grow_to(ProgramIndex program, std::uint64_t total_tokens) {
  const std::uint64_t want = blocks_for(total_tokens);
  const std::uint64_t have = gpu_blocks(program);
  if (want <= have) return AllocOutcome::Ok;
  const std::uint64_t extra = want - have;
  if (extra > gpu_free()) return AllocOutcome::Insufficient;
  gpu_[program] += extra;
  gpu_used_ += extra;
  return AllocOutcome::Ok;
}

std::uint64_t MemoryPool::free_blocks(ProgramIndex program) {
  auto it = gpu_.find(program);
  if (it == gpu_.end()) return 0;
  const std::uint64_t n = it->second;
  gpu_used_ -= n;
  gpu_.erase(it);
  return n;
}

std::uint64_t MemoryPool::drop_dram(ProgramIndex program) {
  auto it = dram_.find(program);
  if (it == dram_.end()) return 0;
  const std::uint64_t n = it->second;
  dram_used_ -= n;
  dram_.erase(it);
  dram_ready_at_.erase(program);
  return n;
}

double MemoryPool::transfer_seconds(std::uint64_t blocks) const {
  return static_cast<double>(blocks) / config_.swap_bandwidth_blocks_per_s;
}

SwapResult MemoryPool::swap_out(ProgramIndex program, SimTime now) {
  auto it = gpu_.find(program);
  if (it == gpu_.end()) {
    throw InvariantViolation("swap_out of program " + std::to_string(program) +
                             " without GPU residency");
  }
  SwapResult r;
  r.blocks = it->second;
  if (r.blocks > dram_free()) {
    free_blocks(program);
    r.evicted = true;
    r.completion = now;
    return r;
  }
  free_blocks(program);
  dram_[program] += r.blocks;
  dram_used_ += r.blocks;
  const SimTime start = std::max(now, out_channel_free_);
  r.completion = start + transfer_seconds(r.blocks);
  out_channel_free_ = r.completion;
  dram_ready_at_[program] = r.completion;
  r.ok = true;
  return r;
}

SwapResult MemoryPool::swap_in(ProgramIndex program, SimTime now) {
  auto it = dram_.find(program);
  if (it == dram_.end()) {
    throw InvariantViolation("swap_in of program " + std::to_string(program) +
                             " without DRAM residency");
  }
  SwapResult r;
  r.blocks = it->second;
  if (r.blocks > gpu_free()) return r;
  const SimTime ready = dram_ready_at_[program];
  drop_dram(program);
  gpu_[program] += r.blocks;
  gpu_used_ += r.blocks;
  const SimTime start = std::max({now, in_channel_free_, ready});
  r.completion = start + transfer_seconds(r.blocks);
  in_channel_free_ = r.completion;
  r.ok = true;
  return r;
}

std::uint64_t MemoryPool::gpu_blocks(ProgramIndex program) const {
  auto it = gpu_.find(program);
  return it == gpu_.end() ? 0 : it->second;
}

std::uint64_t MemoryPool::dram_blocks(ProgramIndex program) const {
  auto it = dram_.find(program);
  return it == dram_.end() ? 0 : it->second;
}

void MemoryPool::check_conservation() const {
  ++checks_;
  if (gpu_used_ > config_.gpu_capacity_blocks) {
    throw InvariantViolation("GPU blocks over capacity: " + std::to_string(gpu_used_) + " > " +
                             std::to_string(config_.gpu_capacity_blocks));
  }
  if (dram_used_ > config_.dram_capacity_blocks) {
    throw InvariantViolation("DRAM blocks over capacity: " + std::to_string(dram_used_) +
                             " > " + std::to_string(config_.dram_capacity_blocks));
  }
  std::uint64_t gsum = 0;
  for (const auto& [p, n] : gpu_) {
    gsum += n;
    if (dram_.count(p)) {
      throw InvariantViolation("program " + std::to_string(p) + " resident in both tiers");
    }
  }
  std::uint64_t dsum = 0;
  for (const auto& [p, n] : dram_) dsum += n;
  if (gsum != gpu_used_ || dsum != dram_used_) {
    throw InvariantViolation("block accounting drifted from per-program map");
  }
}

}  // namespace agentsim::sim
