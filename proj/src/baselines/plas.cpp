#include "agentsim/baselines/policies.hpp"

namespace agentsim::baselines {

PriorityKey PlasPolicy::priority(const Request& r, const PolicyView& view) const {
  PriorityKey k;
  k.class_key = view.service.service(r.program);
  k.arrival_key = view.programs.at(r.program).arrival_time;
  return k;
}

FinishDecision PlasPolicy::on_finish(const Request& r, const std::string&, SimTime,
                                     const PolicyView& view) {
  FinishDecision d = sched::offload_or_evict(view, r.program);
  d.basis = "plas";
  return d;
}

}  // namespace agentsim::baselines
