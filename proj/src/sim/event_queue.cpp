#include "agentsim/sim/event_queue.hpp"

#include <cmath>
#include <string>

namespace agentsim::sim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ToolCallComplete: return "tool_call_complete";
    case EventKind::ProgramArrival: return "program_arrival";
    case EventKind::EngineIterationEnd: return "engine_iteration_end";
  }
  return "unknown";
}

void EventQueue::push(SimTime time, EventKind kind, ProgramIndex program) {
  if (!(time >= clock_) || std::isnan(time)) {
    throw InvariantViolation("event at t=" + std::to_string(time) +
                             " pushed behind clock t=" + std::to_string(clock_));
  }
  heap_.push(Event{time, kind, next_sequence_++, program});
}

std::optional<Event> EventQueue::advance() {
  if (heap_.empty()) return std::nullopt;
  Event e = heap_.top();
  heap_.pop();
  clock_ = e.time;
  return e;
}

std::optional<SimTime> EventQueue::next_time() const {
  if (heap_.empty()) return std::nullopt;
  return heap_.top().time;
}

}  // namespace agentsim::sim
