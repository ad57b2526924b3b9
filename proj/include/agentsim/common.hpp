#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace agentsim {

/// Simulated wall-clock seconds. Non-negative and monotone within a run.
using SimTime = double;

/// Dense index of a program inside one simulation run.
using ProgramIndex = std::uint32_t;
using RequestId = std::uint64_t;

inline constexpr SimTime kNever = std::numeric_limits<double>::infinity();

/// A broken simulator invariant. Aborts the run; never a normal outcome.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad user-supplied configuration or distribution parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace agentsim
