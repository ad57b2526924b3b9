#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "agentsim/sched/request.hpp"

namespace agentsim::sched {

/// Waiting/preempted requests. Priorities are dynamic (pins and attained
/// service change between steps), so the best entry is found by scan.
class WaitingQueue {
 public:
  void push(RequestId id, ProgramIndex program);
  /// Throws InvariantViolation when the id is absent.
  void erase(RequestId id);

  bool contains_program(ProgramIndex program) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<RequestId>& ids() const { return ids_; }

  /// Id with the lowest key, or nullopt when empty.
  std::optional<RequestId> best(const std::function<PriorityKey(RequestId)>& key) const;

 private:
  std::vector<RequestId> ids_;
  std::map<RequestId, ProgramIndex> entries_;
  std::map<ProgramIndex, std::uint32_t> per_program_;
};

}  // namespace agentsim::sched
