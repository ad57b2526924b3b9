#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agentsim/common.hpp"

namespace agentsim::workload {

inline constexpr std::uint64_t kDefaultContextWindow = 131072;

/// One LLM turn of an agentic program. The tool fields describe the call that
/// follows this turn; the final turn has neither.
struct TurnSpec {
  std::uint64_t new_prompt_tokens = 0;  // appended to context, incl. tool output
  std::uint64_t decode_tokens = 1;
  std::optional<std::string> tool_name;
  std::optional<double> tool_duration_s;

  bool has_tool() const { return tool_name.has_value(); }
  std::uint64_t tokens() const { return new_prompt_tokens + decode_tokens; }
  bool operator==(const TurnSpec&) const = default;
};

struct ProgramSpec {
  std::string program_id;
  SimTime arrival_time_s = 0.0;
  std::vector<TurnSpec> turns;

  std::uint64_t total_tokens() const;
  bool operator==(const ProgramSpec&) const = default;
};

using Trace = std::vector<ProgramSpec>;

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Checks every TurnSpec/ProgramSpec invariant. `line` is only used to label
/// the error (0 when the program did not come from a file).
void validate_program(const ProgramSpec& program, std::uint64_t context_window,
                      std::size_t line = 0);

/// Parses line-delimited JSON, one program per line. Blank lines are skipped.
/// Result is stably sorted by arrival time.
Trace parse_trace(const std::string& text, std::uint64_t context_window = kDefaultContextWindow);
Trace load_trace(const std::filesystem::path& path,
                 std::uint64_t context_window = kDefaultContextWindow);

std::string serialize_program(const ProgramSpec& program);
std::string serialize_trace(const Trace& trace);
void save_trace(const Trace& trace, const std::filesystem::path& path);

/// Stable 64-bit FNV-1a digest of the canonical serialization, as 16 hex chars.
std::string trace_hash(const Trace& trace);

}  // namespace agentsim::workload
