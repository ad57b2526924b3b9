#include "agentsim/baselines/policies.hpp"
#include "agentsim/sched/ttl_policy.hpp"

namespace agentsim::baselines {

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> kNames = {"fcfs",      "program-fcfs", "plas",
                                                  "infercept", "ttl",          "ttl-simple"};
  return kNames;
}

std::unique_ptr<sched::Policy> make_policy(const std::string& name,
                                           const sim::EngineConfig& engine,
                                           const sim::MemoryConfig& memory) {
  if (name == "fcfs") return std::make_unique<FcfsPolicy>();
  if (name == "program-fcfs") return std::make_unique<ProgramFcfsPolicy>();
  if (name == "plas") return std::make_unique<PlasPolicy>();
  if (name == "infercept") {
    return std::make_unique<InferceptPolicy>(InferceptCostModel{
        memory.swap_bandwidth_blocks_per_s, engine.prefill_rate_tokens_per_s});
  }
  if (name == "ttl") return std::make_unique<sched::TtlPolicy>();
  if (name == "ttl-simple") return std::make_unique<sched::SimplifiedTtlPolicy>();
  std::string valid;
  for (const auto& n : policy_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown policy '" + name + "' (valid: " + valid + ")");
}

}  // namespace agentsim::baselines
