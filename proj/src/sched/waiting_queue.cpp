#include "agentsim/sched/waiting_queue.hpp"

#include <algorithm>
#include <string>

namespace agentsim::sched {

void WaitingQueue::push(RequestId id, ProgramIndex program) {
  if (!entries_.emplace(id, program).second) {
    throw InvariantViolation("request " + std::to_string(id) + " queued twice");
  }
  ids_.push_back(id);
  ++per_program_[program];
}

void WaitingQueue::erase(RequestId id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw InvariantViolation("request " + std::to_string(id) + " not in waiting queue");
  }
  auto pp = per_program_.find(it->second);
  if (--pp->second == 0) per_program_.erase(pp);
  entries_.erase(it);
  ids_.erase(std::find(ids_.begin(), ids_.end(), id));
}

bool WaitingQueue::contains_program(ProgramIndex program) const {
  return per_program_.count(program) != 0;
}

std::optional<RequestId> WaitingQueue::best(
    const std::function<PriorityKey(RequestId)>& key) const {
  std::optional<RequestId> best_id;
  PriorityKey best_key;
  for (RequestId id : ids_) {
    PriorityKey k = key(id);
    if (!best_id || k < best_key) {
      best_id = id;
      best_key = k;
    }
  }
  return best_id;
}

}  // namespace agentsim::sched
