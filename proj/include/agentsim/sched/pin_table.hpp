#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "agentsim/common.hpp"

namespace agentsim::sched {

struct PinEntry {
  ProgramIndex program = 0;
  SimTime expiry = kNever;  // kNever: held until reuse or victim selection
  std::uint64_t pinned_blocks = 0;
  SimTime program_arrival = 0.0;
};

enum class UnpinReason { Expired = 0, Admitted = 1, Victim = 2, ProgramComplete = 3 };
const char* to_string(UnpinReason reason);

/// Program -> pin. Each entry is removed exactly once, for one reason.
class PinTable {
 public:
  void pin(const PinEntry& entry);
  /// Throws InvariantViolation if the program is not pinned.
  PinEntry unpin(ProgramIndex program, UnpinReason reason);

  bool contains(ProgramIndex program) const { return pins_.count(program) != 0; }
  const PinEntry* find(ProgramIndex program) const;
  bool empty() const { return pins_.empty(); }
  std::size_t size() const { return pins_.size(); }
  std::vector<PinEntry> entries() const;

  /// Pins ordered latest program arrival first (ties: higher index first).
  std::vector<PinEntry> victim_order() const;

  std::uint64_t pinned_total() const { return created_; }
  std::uint64_t removed(UnpinReason reason) const { return removed_[static_cast<int>(reason)]; }

 private:
  std::map<ProgramIndex, PinEntry> pins_;
  std::uint64_t created_ = 0;
  std::array<std::uint64_t, 4> removed_{};
};

}  // namespace agentsim::sched
