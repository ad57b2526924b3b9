#include "agentsim/baselines/policies.hpp"

namespace agentsim::baselines {

PriorityKey FcfsPolicy::priority(const Request& r, const PolicyView&) const {
  PriorityKey k;
  k.arrival_key = r.engine_arrival_time;
  return k;
}

FinishDecision FcfsPolicy::on_finish(const Request& r, const std::string&, SimTime,
                                     const PolicyView& view) {
  FinishDecision d = sched::offload_or_evict(view, r.program);
  d.basis = "fcfs";
  return d;
}

PriorityKey ProgramFcfsPolicy::priority(const Request& r, const PolicyView& view) const {
  PriorityKey k;
  k.arrival_key = view.programs.at(r.program).arrival_time;
  return k;
}

FinishDecision ProgramFcfsPolicy::on_finish(const Request& r, const std::string&, SimTime,
                                            const PolicyView& view) {
  FinishDecision d = sched::offload_or_evict(view, r.program);
  d.basis = "program-fcfs";
  return d;
}

}  // namespace agentsim::baselines
