#include "agentsim/sched/pin_table.hpp"

#include <algorithm>
#include <string>

namespace agentsim::sched {

const char* to_string(UnpinReason reason) {
  switch (reason) {
    case UnpinReason::Expired: return "expired";
    case UnpinReason::Admitted: return "admitted";
    case UnpinReason::Victim: return "victim";
    case UnpinReason::ProgramComplete: return "program_complete";
  }
  return "unknown";
}

void PinTable::pin(const PinEntry& entry) {
  if (!pins_.emplace(entry.program, entry).second) {
    throw InvariantViolation("program " + std::to_string(entry.program) + " pinned twice");
  }
  ++created_;
}

PinEntry PinTable::unpin(ProgramIndex program, UnpinReason reason) {
  auto it = pins_.find(program);
  if (it == pins_.end()) {
    throw InvariantViolation("unpin of program " + std::to_string(program) + " without a pin");
  }
  PinEntry e = it->second;
  pins_.erase(it);
  ++removed_[static_cast<int>(reason)];
  return e;
}

const PinEntry* PinTable::find(ProgramIndex program) const {
  auto it = pins_.find(program);
  return it == pins_.end() ? nullptr : &it->second;
}

std::vector<PinEntry> PinTable::entries() const {
  std::vector<PinEntry> out;
  out.reserve(pins_.size());
  for (const auto& [_, e] : pins_) out.push_back(e);
  return out;
}

std::vector<PinEntry> PinTable::victim_order() const {
  std::vector<PinEntry> out = entries();
  std::sort(out.begin(), out.end(), [](const PinEntry& a, const PinEntry& b) {
    if (a.program_arrival != b.program_arrival) return a.program_arrival > b.program_arrival;
    return a.program > b.program;
  });
  return out;
}

}  // namespace agentsim::sched
