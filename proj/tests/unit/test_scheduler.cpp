#include <gtest/gtest.h>

#include <algorithm>
#include <memory>

#include "agentsim/baselines/policies.hpp"
#include "agentsim/sched/pin_table.hpp"
#include "agentsim/sched/scheduler.hpp"
#include "agentsim/sched/ttl_policy.hpp"
#include "agentsim/sched/waiting_queue.hpp"

using namespace agentsim;
using namespace agentsim::sched;

namespace {

struct Harness {
  sim::MemoryPool memory;
  estimator::ToolEstimator estimator;
  sim::EngineConfig engine;
  Scheduler sched;
  RequestId next_id = 0;

  Harness(const std::string& policy, std::uint64_t gpu_blocks, std::uint64_t dram_blocks = 0,
          SchedulerOptions opts = {}, estimator::EstimatorConfig est = {})
      : memory(mem(gpu_blocks, dram_blocks)),
        estimator(est),
        sched(baselines::make_policy(policy, engine, memory.config()), memory, estimator, engine,
              opts) {}

  static sim::MemoryConfig mem(std::uint64_t gpu, std::uint64_t dram) {
    sim::MemoryConfig c;
    c.gpu_capacity_blocks = gpu;
    c.block_size_tokens = 10;
    c.dram_capacity_blocks = dram;
    c.swap_bandwidth_blocks_per_s = 10.0;
    return c;
  }

  void programs(std::initializer_list<double> arrivals, std::uint32_t turns = 3) {
    ProgramIndex p = 0;
    for (double a : arrivals) {
      sched.register_program(p, "p" + std::to_string(p), a, turns);
      ++p;
    }
  }

  RequestId arrive(ProgramIndex p, std::uint32_t turn, std::uint64_t context, SimTime now,
                   bool last = false, std::uint64_t decode = 10) {
    Request r;
    r.id = next_id++;
    r.program = p;
    r.turn_index = turn;
    r.last_turn = last;
    r.total_context_tokens = context;
    r.decode_tokens_total = decode;
    r.decode_tokens_remaining = decode;
    r.engine_arrival_time = now;
    sched.on_request_arrive(r, now);
    return r.id;
  }

  FinishOutcome finish(RequestId id, SimTime now, const std::string& tool = "cat") {
    Request& r = sched.request(id);
    r.prefill_remaining = 0;
    r.decode_tokens_remaining = 0;
    return sched.on_request_finish(id, now, tool);
  }

  std::vector<RequestId> admitted(const StepResult& s) {
    std::vector<RequestId> ids;
    for (const auto& a : s.admitted) ids.push_back(a.request);
    return ids;
  }
};

}  // namespace

TEST(PinTable, LifecycleAndVictimOrder) {
  PinTable t;
  t.pin({0, 5.0, 3, 1.0});
  t.pin({1, 6.0, 2, 3.0});
  t.pin({2, 7.0, 1, 2.0});
  EXPECT_THROW(t.pin({1, 1.0, 1, 3.0}), InvariantViolation);
  auto order = t.victim_order();
  ASSERT_EQ(order.size(), 3u);
  EXPECT_EQ(order[0].program, 1u);
  EXPECT_EQ(order[1].program, 2u);
  EXPECT_EQ(order[2].program, 0u);
  t.unpin(2, UnpinReason::Victim);
  EXPECT_THROW(t.unpin(2, UnpinReason::Expired), InvariantViolation);
  EXPECT_EQ(t.pinned_total(), 3u);
  EXPECT_EQ(t.removed(UnpinReason::Victim), 1u);
}

TEST(WaitingQueue, BestByKeyAndProgramMembership) {
  WaitingQueue q;
  q.push(10, 0);
  q.push(11, 1);
  q.push(12, 1);
  EXPECT_TRUE(q.contains_program(1));
  auto best = q.best([](RequestId id) {
    PriorityKey k;
    k.arrival_key = id == 12 ? 0.0 : 1.0;
    k.sequence = id;
    return k;
  });
  EXPECT_EQ(*best, 12u);
  q.erase(11);
  q.erase(12);
  EXPECT_FALSE(q.contains_program(1));
  EXPECT_THROW(q.erase(12), InvariantViolation);
}

TEST(PriorityKey, LexicographicOrder) {
  PriorityKey preempted{0, 1.0, 9.0, 9};
  PriorityKey pinned{1, 0.0, 9.0, 9};
  PriorityKey early{1, 1.0, 0.0, 9};
  PriorityKey late{1, 1.0, 0.0, 10};
  EXPECT_LT(preempted, pinned);
  EXPECT_LT(pinned, early);
  EXPECT_LT(early, late);
}

TEST(Registry, UnknownPolicyListsValidNames) {
  sim::EngineConfig e;
  sim::MemoryConfig m;
  try {
    baselines::make_policy("nope", e, m);
    FAIL();
  } catch (const ConfigError& err) {
    const std::string msg = err.what();
    for (const auto& name : baselines::policy_names()) {
      EXPECT_NE(msg.find(name), std::string::npos) << name;
    }
  }
  for (const auto& name : baselines::policy_names()) {
    EXPECT_EQ(baselines::make_policy(name, e, m)->name(), name);
  }
}

TEST(Scheduler, AdmitsInPriorityOrderUntilMemoryRunsOut) {
  Harness h("fcfs", 10);
  h.programs({0.0, 1.0, 2.0});
  auto a = h.arrive(0, 0, 30, 0.0);  // 4 blocks with decode
  auto b = h.arrive(1, 0, 30, 0.1);
  auto c = h.arrive(2, 0, 30, 0.2);
  auto step = h.sched.schedule_step(0.2);
  EXPECT_EQ(h.admitted(step), (std::vector<RequestId>{a, b}));
  EXPECT_EQ(h.memory.gpu_used(), 8u);
  EXPECT_TRUE(h.sched.waiting().contains_program(2));
  (void)c;
}

TEST(Scheduler, RecordsIntervalAgainstPreviousTool) {
  Harness h("fcfs", 100);
  h.programs({0.0});
  auto r = h.arrive(0, 0, 30, 0.0);
  h.sched.schedule_step(0.0);
  h.finish(r, 1.0, "grep");
  h.arrive(0, 1, 50, 3.5);
  EXPECT_EQ(h.estimator.per_tool("grep").count(), 1u);
  EXPECT_DOUBLE_EQ(h.estimator.per_tool("grep").mean(), 2.5);
  EXPECT_EQ(h.estimator.global().count(), 1u);
}

TEST(Scheduler, TtlPinsAndReusesCache) {
  Harness h("ttl", 100);
  h.programs({0.0});
  auto r = h.arrive(0, 0, 30, 0.0);
  h.sched.schedule_step(0.0);
  auto out = h.finish(r, 1.0);
  ASSERT_TRUE(out.decision);
  EXPECT_EQ(out.decision->kind, Disposition::Pin);
  EXPECT_NEAR(out.decision->expiry, 1.0 + 11.0, 1e-12);  // T_default with AvgTurns = 1
  EXPECT_TRUE(h.sched.pins().contains(0));
  EXPECT_EQ(h.memory.gpu_blocks(0), 4u);

  h.arrive(0, 1, 60, 2.0);
  auto step = h.sched.schedule_step(2.0);
  ASSERT_EQ(step.admitted.size(), 1u);
  EXPECT_EQ(step.admitted[0].cached_tokens, 40u);
  EXPECT_EQ(step.admitted[0].uncached_tokens, 20u);
  EXPECT_FALSE(h.sched.pins().contains(0));
  EXPECT_EQ(h.sched.pins().removed(UnpinReason::Admitted), 1u);
}

TEST(Scheduler, ExpiredPinReleasedOnlyWhenProgramNotWaiting) {
  Harness h("ttl", 100);
  h.programs({0.0, 0.0});
  auto r0 = h.arrive(0, 0, 30, 0.0);
  auto r1 = h.arrive(1, 0, 30, 0.0);
  h.sched.schedule_step(0.0);
  h.finish(r0, 1.0);
  h.finish(r1, 1.0);
  // Program 1's next turn is already waiting at expiry time; program 0's is not.
  h.arrive(1, 1, 50, 11.0);
  EXPECT_EQ(h.sched.release_expired_pins(12.5), 1u);
  EXPECT_FALSE(h.sched.pins().contains(0));
  EXPECT_TRUE(h.sched.pins().contains(1));
  EXPECT_EQ(h.memory.gpu_blocks(0), 0u);
}

TEST(Scheduler, LastTurnFreesEverything) {
  Harness h("ttl", 100, 100);
  h.programs({0.0}, 2);
  auto r = h.arrive(0, 0, 30, 0.0);
  h.sched.schedule_step(0.0);
  h.finish(r, 1.0);
  auto r2 = h.arrive(0, 1, 50, 1.5, true);
  h.sched.schedule_step(1.5);
  auto out = h.finish(r2, 2.0);
  EXPECT_FALSE(out.decision);
  EXPECT_EQ(h.memory.gpu_used(), 0u);
  EXPECT_EQ(h.memory.dram_used(), 0u);
  EXPECT_TRUE(h.sched.pins().empty());
  EXPECT_EQ(h.estimator.turns().completed_programs(), 1u);
}

TEST(Scheduler, PinnedProgramJumpsAheadOfEarlierUnpinned) {
  Harness h("ttl", 100);
  h.programs({0.0, 5.0});
  auto r1 = h.arrive(1, 0, 30, 5.0);
  h.sched.schedule_step(5.0);
  h.finish(r1, 6.0);
  auto fresh = h.arrive(0, 1, 30, 6.5);  // earlier program, not pinned
  auto pinned = h.arrive(1, 1, 50, 6.5);
  EXPECT_LT(h.sched.get_priority(h.sched.request(pinned)),
            h.sched.get_priority(h.sched.request(fresh)));
}

TEST(Scheduler, VictimsAreLatestArrivalFirstAndSkipCandidate) {
  Harness h("ttl", 12);
  h.programs({0.0, 1.0, 2.0, 3.0});
  auto a = h.arrive(0, 0, 30, 0.0);
  auto b = h.arrive(1, 0, 30, 1.0);
  auto c = h.arrive(2, 0, 30, 2.0);
  h.sched.schedule_step(2.0);
  h.finish(a, 3.0);
  h.finish(b, 3.0);
  h.finish(c, 3.0);
  EXPECT_EQ(h.memory.gpu_free(), 0u);
  // Program 0 comes back needing two extra blocks; program 2 (latest) must go.
  h.arrive(0, 1, 50, 4.0);
  auto step = h.sched.schedule_step(4.0);
  EXPECT_EQ(step.admitted.size(), 1u);
  std::vector<std::string> victims;
  for (const auto& rec : h.sched.audit_log()) {
    if (rec.event == "victim") victims.push_back(rec.program);
  }
  EXPECT_EQ(victims, (std::vector<std::string>{"p2"}));
  EXPECT_TRUE(h.sched.pins().contains(1));
}

TEST(Scheduler, IdleTriggerWaitsForRunningWork) {
  SchedulerOptions idle;
  idle.deadlock_trigger = DeadlockTrigger::Idle;
  Harness h("ttl", 8, 0, idle);
  h.programs({0.0, 1.0, 2.0});
  auto a = h.arrive(0, 0, 30, 0.0);
  h.arrive(1, 0, 30, 1.0);
  h.sched.schedule_step(1.0);
  h.finish(a, 2.0);  // program 0 pinned, program 1 running
  h.arrive(2, 0, 30, 2.5);
  EXPECT_TRUE(h.sched.schedule_step(2.5).admitted.empty());
  EXPECT_TRUE(h.sched.pins().contains(0));

  SchedulerOptions blocked;
  blocked.deadlock_trigger = DeadlockTrigger::Blocked;
  Harness g("ttl", 8, 0, blocked);
  g.programs({0.0, 1.0, 2.0});
  auto x = g.arrive(0, 0, 30, 0.0);
  g.arrive(1, 0, 30, 1.0);
  g.sched.schedule_step(1.0);
  g.finish(x, 2.0);
  g.arrive(2, 0, 30, 2.5);
  EXPECT_EQ(g.sched.schedule_step(2.5).admitted.size(), 1u);
  EXPECT_FALSE(g.sched.pins().contains(0));
}

TEST(Scheduler, FcfsOffloadsWhenDramHasRoomElseEvicts) {
  Harness h("fcfs", 100, 4);
  h.programs({0.0, 0.0});
  auto a = h.arrive(0, 0, 30, 0.0);
  auto b = h.arrive(1, 0, 30, 0.0);
  h.sched.schedule_step(0.0);
  auto oa = h.finish(a, 1.0);
  auto ob = h.finish(b, 1.0);
  EXPECT_EQ(oa.decision->kind, Disposition::Swap);
  EXPECT_EQ(oa.swapped_out_blocks, 4u);
  EXPECT_EQ(ob.decision->kind, Disposition::Evict);
  EXPECT_EQ(h.memory.dram_blocks(0), 4u);

  h.arrive(0, 1, 50, 2.0);
  h.arrive(1, 1, 50, 2.0);
  auto step = h.sched.schedule_step(2.0);
  ASSERT_EQ(step.admitted.size(), 2u);
  EXPECT_EQ(step.admitted[0].swapped_in_blocks, 4u);
  EXPECT_GT(step.admitted[0].ready_time, 2.0);
  EXPECT_EQ(step.admitted[0].uncached_tokens, 10u);
  EXPECT_EQ(step.admitted[1].uncached_tokens, 50u);
}

TEST(Scheduler, SimplifiedPinsOnlyBelowThreshold) {
  Harness h("ttl-simple", 100);
  h.programs({0.0});
  auto r = h.arrive(0, 0, 10, 0.0);
  h.sched.schedule_step(0.0);
  auto out = h.finish(r, 1.0, "cat");
  EXPECT_EQ(out.decision->kind, Disposition::Evict);  // nothing observed yet
  for (int i = 0; i < 5; ++i) h.estimator.record_interval("cat", 0.5);
  auto r2 = h.arrive(0, 1, 20, 1.5);
  h.sched.schedule_step(1.5);
  auto out2 = h.finish(r2, 2.0, "cat");
  EXPECT_EQ(out2.decision->kind, Disposition::Pin);
  EXPECT_DOUBLE_EQ(out2.decision->expiry, 7.0);
}

TEST(Scheduler, ZeroLengthPinFallsBack) {
  estimator::EstimatorConfig est;
  est.ttl_max_s = 0.0;
  Harness h("ttl", 100, 0, {}, est);
  h.programs({0.0});
  auto r = h.arrive(0, 0, 10, 0.0);
  h.sched.schedule_step(0.0);
  auto out = h.finish(r, 1.0);
  EXPECT_EQ(out.decision->kind, Disposition::Evict);
  EXPECT_TRUE(h.sched.pins().empty());
}

TEST(Scheduler, PlasPrefersLeastService) {
  Harness h("plas", 100);
  h.programs({0.0, 1.0});
  auto a = h.arrive(0, 0, 10, 2.0);
  auto b = h.arrive(1, 0, 10, 2.0);
  h.sched.attribute_service(0, 5.0);
  h.sched.attribute_service(1, 1.0);
  EXPECT_LT(h.sched.get_priority(h.sched.request(b)), h.sched.get_priority(h.sched.request(a)));
}

TEST(Scheduler, ProgramFcfsOrdersByProgramArrival) {
  Harness h("program-fcfs", 100);
  h.programs({0.0, 1.0});
  auto late_prog = h.arrive(1, 0, 10, 1.0);
  auto early_prog = h.arrive(0, 1, 10, 3.0);
  EXPECT_LT(h.sched.get_priority(h.sched.request(early_prog)),
            h.sched.get_priority(h.sched.request(late_prog)));

  Harness f("fcfs", 100);
  f.programs({0.0, 1.0});
  auto x = f.arrive(1, 0, 10, 1.0);
  auto y = f.arrive(0, 1, 10, 3.0);
  EXPECT_LT(f.sched.get_priority(f.sched.request(x)), f.sched.get_priority(f.sched.request(y)));
}

TEST(Infercept, DecisionRule) {
  baselines::InferceptCostModel cost{10.0, 1000.0};
  // 5 blocks each way at 10 blocks/s: round trip 1 s.
  EXPECT_EQ(baselines::infercept_decision(0.2, 5, true, cost), baselines::InferceptAction::Preserve);
  EXPECT_EQ(baselines::infercept_decision(30.0, 5, true, cost), baselines::InferceptAction::Swap);
  EXPECT_EQ(baselines::infercept_decision(30.0, 5, false, cost), baselines::InferceptAction::Evict);
  EXPECT_EQ(baselines::infercept_decision(1.0, 5, true, cost), baselines::InferceptAction::Swap);
}

TEST(Infercept, PreservesWithoutExpiry) {
  Harness h("infercept", 100, 100);
  h.programs({0.0});
  for (int i = 0; i < 5; ++i) h.estimator.record_interval("cat", 0.1);
  auto r = h.arrive(0, 0, 30, 0.0);
  h.sched.schedule_step(0.0);
  auto out = h.finish(r, 1.0, "cat");
  EXPECT_EQ(out.decision->kind, Disposition::Pin);
  EXPECT_EQ(out.decision->expiry, kNever);
  EXPECT_EQ(h.sched.release_expired_pins(1e9), 0u);
}

TEST(Scheduler, PreemptionSwapsLowerPriorityWork) {
  sim::EngineConfig e;
  e.preemption = true;
  sim::MemoryPool mem(Harness::mem(8, 100));
  estimator::ToolEstimator est;
  Scheduler s(baselines::make_policy("program-fcfs", e, mem.config()), mem, est, e);
  s.register_program(0, "early", 0.0, 2);
  s.register_program(1, "late", 1.0, 2);
  Request late;
  late.id = 1;
  late.program = 1;
  late.total_context_tokens = 60;
  late.decode_tokens_total = late.decode_tokens_remaining = 10;
  s.on_request_arrive(late, 1.0);
  s.schedule_step(1.0);
  Request early;
  early.id = 2;
  early.program = 0;
  early.total_context_tokens = 60;
  early.decode_tokens_total = early.decode_tokens_remaining = 10;
  s.on_request_arrive(early, 2.0);
  auto step = s.schedule_step(2.0);
  ASSERT_EQ(step.preempted.size(), 1u);
  EXPECT_EQ(step.preempted[0].request, 1u);
  ASSERT_EQ(step.admitted.size(), 1u);
  EXPECT_EQ(step.admitted[0].request, 2u);
  EXPECT_EQ(s.request(1).state, RequestState::Preempted);
  mem.check_conservation();
}
