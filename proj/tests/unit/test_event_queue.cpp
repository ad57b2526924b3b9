#include <gtest/gtest.h>

#include "agentsim/sim/event_queue.hpp"

using namespace agentsim;
using sim::EventKind;
using sim::EventQueue;

TEST(EventQueue, PopsInTimeOrder) {
  EventQueue q;
  q.push(3.0, EventKind::ProgramArrival, 3);
  q.push(1.0, EventKind::ProgramArrival, 1);
  q.push(2.0, EventKind::ProgramArrival, 2);
  std::vector<ProgramIndex> seen;
  while (auto e = q.advance()) seen.push_back(e->program);
  EXPECT_EQ(seen, (std::vector<ProgramIndex>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(q.now(), 3.0);
}

TEST(EventQueue, TiesBreakOnKindThenInsertion) {
  EventQueue q;
  q.push(1.0, EventKind::EngineIterationEnd, 0);
  q.push(1.0, EventKind::ProgramArrival, 1);
  q.push(1.0, EventKind::ToolCallComplete, 2);
  q.push(1.0, EventKind::ProgramArrival, 3);
  std::vector<ProgramIndex> seen;
  while (auto e = q.advance()) seen.push_back(e->program);
  EXPECT_EQ(seen, (std::vector<ProgramIndex>{2, 1, 3, 0}));
}

TEST(EventQueue, RejectsPastEvents) {
  EventQueue q;
  q.push(5.0, EventKind::ProgramArrival);
  ASSERT_TRUE(q.advance());
  EXPECT_THROW(q.push(4.0, EventKind::ProgramArrival), InvariantViolation);
  EXPECT_NO_THROW(q.push(5.0, EventKind::ProgramArrival));
}

TEST(EventQueue, EmptyMeansDone) {
  EventQueue q;
  EXPECT_TRUE(q.empty());
  EXPECT_FALSE(q.advance());
  EXPECT_FALSE(q.next_time());
  q.push(0.5, EventKind::ToolCallComplete);
  EXPECT_EQ(q.size(), 1u);
  EXPECT_DOUBLE_EQ(*q.next_time(), 0.5);
}

TEST(EventQueue, ClockNeverDecreases) {
  EventQueue q;
  for (int i = 0; i < 200; ++i) q.push((i * 37 % 101) * 0.1, EventKind::ProgramArrival, i);
  double last = 0.0;
  while (auto e = q.advance()) {
    EXPECT_GE(e->time, last);
    last = e->time;
  }
}
