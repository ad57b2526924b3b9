#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "agentsim/common.hpp"

namespace agentsim::sched {

/// One pin/unpin/victim/disposition decision, for debugging and verification.
struct AuditRecord {
  SimTime time = 0.0;
  std::string event;  // pin, unpin, victim, swap, evict, preempt, ...
  std::string program;
  std::uint64_t blocks = 0;
  SimTime expiry = kNever;
  std::string detail;
  double predicted_s = 0.0;
  double cost_s = 0.0;

  nlohmann::json to_json() const;
};

std::string audit_to_jsonl(const std::vector<AuditRecord>& log);

}  // namespace agentsim::sched
