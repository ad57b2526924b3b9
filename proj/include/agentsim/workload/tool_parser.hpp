#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace agentsim::workload {

/// A recorded model output that may contain a tool invocation.
struct ToolCallMessage {
  enum class Format {
    Auto,        // JSON function-call blocks, a fenced bash block, or nothing
    Structured,  // JSON function-call block(s)
    Bash,        // a raw shell command line
  };

  std::string raw;
  Format format = Format::Auto;

  static ToolCallMessage bash(std::string command) { return {std::move(command), Format::Bash}; }
  static ToolCallMessage structured(std::string text) {
    return {std::move(text), Format::Structured};
  }
};

/// Extracts the tool label from model output. Total: never throws. Malformed
/// structured blocks yield nullopt and bump `warnings()`.
class ToolNameParser {
 public:
  std::optional<std::string> parse(const ToolCallMessage& msg);
  std::uint64_t warnings() const { return warnings_; }

 private:
  std::optional<std::string> parse_structured(std::string_view text);

  std::uint64_t warnings_ = 0;
};

/// First executable of a shell command line: split on "&&" / "||", take the
/// first sub-command, return its first whitespace-delimited token.
std::optional<std::string> bash_tool_name(std::string_view command);

}  // namespace agentsim::workload
