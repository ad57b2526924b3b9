#include "agentsim/sched/ttl_policy.hpp"

namespace agentsim::sched {

PriorityKey pinning_aware_priority(const Request& r, const PolicyView& view) {
  PriorityKey k;
  k.class_key = view.pins.contains(r.program) ? 0.0 : 1.0;
  k.arrival_key = view.programs.at(r.program).arrival_time;
  return k;
}

FinishDecision TtlPolicy::on_finish(const Request&, const std::string& next_tool, SimTime now,
                                    const PolicyView& view) {
  const estimator::SelectedBound bound = view.estimator.select_bound(next_tool);
  FinishDecision d;
  d.kind = Disposition::Pin;
  d.expiry = view.estimator.calc_ttl(now, next_tool);
  d.basis = estimator::to_string(bound.source);
  d.predicted_s = bound.value;
  return d;
}

FinishDecision SimplifiedTtlPolicy::on_finish(const Request& r, const std::string& next_tool,
                                              SimTime now, const PolicyView& view) {
  if (auto pin_for = view.estimator.simplified_decision(next_tool)) {
    FinishDecision d;
    d.kind = Disposition::Pin;
    d.expiry = now + *pin_for;
    d.basis = "below-threshold";
    return d;
  }
  FinishDecision d = offload_or_evict(view, r.program);
  d.basis = "no-pin";
  return d;
}

}  // namespace agentsim::sched
