#include "agentsim/workload/tool_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <json.hpp>

namespace agentsim::workload {

using nlohmann::json;

namespace {

bool is_call_type(const std::string& type) {
  static constexpr std::array<std::string_view, 4> kCallTypes = {
      "function_call", "function", "tool_call", "tool_use"};
  return std::find(kCallTypes.begin(), kCallTypes.end(), type) != kCallTypes.end();
}

std::string_view trim(std::string_view s) {
  auto issp = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && issp(s.front())) s.remove_prefix(1);
  while (!s.empty() && issp(s.back())) s.remove_suffix(1);
  return s;
}

// Body of the first ```bash / ```sh fenced block, if present.
std::optional<std::string_view> fenced_shell_block(std::string_view text) {
  for (std::string_view tag : {"```bash", "```sh"}) {
    auto open = text.find(tag);
    if (open == std::string_view::npos) continue;
    auto body = text.find('\n', open);
    if (body == std::string_view::npos) return std::nullopt;
    ++body;
    auto close = text.find("```", body);
    if (close == std::string_view::npos) close = text.size();
    return text.substr(body, close - body);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> bash_tool_name(std::string_view command) {
  std::size_t cut = command.size();
  for (std::string_view sep : {"&&", "||"}) {
    cut = std::min(cut, command.find(sep));
  }
  std::string_view first = trim(command.substr(0, cut));
  if (first.empty()) return std::nullopt;
  auto end = std::find_if(first.begin(), first.end(),
                          [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  return std::string(first.begin(), end);
}

std::optional<std::string> ToolNameParser::parse_structured(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    ++warnings_;
    return std::nullopt;
  }
  json blocks = doc.is_array() ? doc : json::array({doc});
  for (const json& block : blocks) {
    if (!block.is_object() || !block.contains("type") || !block["type"].is_string()) continue;
    if (!is_call_type(block["type"].get<std::string>())) continue;
    // Responses-style blocks carry the name inline; chat-completions style
    // nests it under "function".
    const json* holder = &block;
    if (!block.contains("name") && block.contains("function") && block["function"].is_object()) {
      holder = &block["function"];
    }
    if (holder->contains("name") && (*holder)["name"].is_string() &&
        !(*holder)["name"].get<std::string>().empty()) {
      return (*holder)["name"].get<std::string>();
    }
    ++warnings_;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string> ToolNameParser::parse(const ToolCallMessage& msg) {
  try {
    std::string_view text = trim(msg.raw);
    switch (msg.format) {
      case ToolCallMessage::Format::Bash:
        if (auto block = fenced_shell_block(text)) return bash_tool_name(*block);
        return bash_tool_name(text);
      case ToolCallMessage::Format::Structured:
        return parse_structured(text);
      case ToolCallMessage::Format::Auto:
        if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
          return parse_structured(text);
        }
        if (auto block = fenced_shell_block(text)) return bash_tool_name(*block);
        return std::nullopt;
    }
  } catch (...) {
    ++warnings_;
  }
  return std::nullopt;
}

}  // namespace agentsim::workload
