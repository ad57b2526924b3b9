#pragma once

#include <map>

#include "agentsim/common.hpp"

namespace agentsim::baselines {

/// Cumulative engine seconds attributed to each program. Non-decreasing.
class ServiceLedger {
 public:
  void attribute(ProgramIndex program, double seconds) {
    if (seconds < 0.0) throw InvariantViolation("negative service attribution");
    service_[program] += seconds;
  }
  double service(ProgramIndex program) const {
    auto it = service_.find(program);
    return it == service_.end() ? 0.0 : it->second;
  }

 private:
  std::map<ProgramIndex, double> service_;
};

}  // namespace agentsim::baselines
