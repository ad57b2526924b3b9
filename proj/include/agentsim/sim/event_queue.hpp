#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "agentsim/common.hpp"

namespace agentsim::sim {

/// Kinds are declared in tie-break order: at equal time a returning turn is
/// seen before a new program, and both before the engine's iteration end.
enum class EventKind : std::uint8_t {
  ToolCallComplete = 0,
  ProgramArrival = 1,
  EngineIterationEnd = 2,
};

const char* to_string(EventKind kind);

struct Event {
  SimTime time = 0.0;
  EventKind kind = EventKind::ProgramArrival;
  std::uint64_t sequence = 0;
  ProgramIndex program = 0;
};

/// Deterministic min-queue on (time, kind, sequence) that owns the clock.
class EventQueue {
 public:
  /// Throws InvariantViolation if `time` lies before the current clock.
  void push(SimTime time, EventKind kind, ProgramIndex program = 0);

  /// Pops the earliest event and moves the clock to it. Empty optional means
  /// the simulation is complete.
  std::optional<Event> advance();

  SimTime now() const { return clock_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::optional<SimTime> next_time() const;

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  SimTime clock_ = 0.0;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace agentsim::sim
