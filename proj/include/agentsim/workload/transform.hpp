#pragma once

#include <cstdint>

#include "agentsim/workload/trace.hpp"

namespace agentsim::workload {

/// Repeats each program's turn list k times and divides every token count by
/// k (integer, floor at 1). Each repetition boundary reuses the tool call of
/// the program's first turn; a single-turn program joins with a zero-length
/// "repeat" call. k = 1 is the identity.
Trace turn_scaling_transform(const Trace& trace, std::uint32_t k);

/// Divides arrival times by `multiplier`, i.e. multiplies the arrival rate.
Trace scale_arrival_rate(const Trace& trace, double multiplier);

}  // namespace agentsim::workload
