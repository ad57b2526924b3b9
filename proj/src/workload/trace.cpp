#include "agentsim/workload/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "agentsim/workload/tool_parser.hpp"

namespace agentsim::workload {

using nlohmann::json;

namespace {

std::string describe(std::size_t line, const std::string& field, const std::string& what) {
  std::string out = "trace";
  if (line > 0) out += " line " + std::to_string(line);
  if (!field.empty()) out += " field '" + field + "'";
  return out + ": " + what;
}

std::uint64_t read_count(const json& obj, const char* key, std::size_t line,
                         const std::string& prefix) {
  if (!obj.contains(key)) throw TraceError(line, prefix + key, "missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw TraceError(line, prefix + key, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

TraceError::TraceError(std::size_t line, const std::string& field, const std::string& what)
    : std::runtime_error(describe(line, field, what)), line_(line), field_(field) {}

std::uint64_t ProgramSpec::total_tokens() const {
  std::uint64_t n = 0;
  for (const auto& t : turns) n += t.tokens();
  return n;
}

void validate_program(const ProgramSpec& program, std::uint64_t context_window,
                      std::size_t line) {
  if (program.program_id.empty()) throw TraceError(line, "program_id", "empty");
  if (!(program.arrival_time_s >= 0.0) || !std::isfinite(program.arrival_time_s)) {
    throw TraceError(line, "arrival_time_s", "must be a finite non-negative number");
  }
  if (program.turns.empty()) throw TraceError(line, "turns", "must be non-empty");
  for (std::size_t i = 0; i < program.turns.size(); ++i) {
    const TurnSpec& t = program.turns[i];
    const std::string prefix = "turns[" + std::to_string(i) + "].";
    if (t.decode_tokens < 1) throw TraceError(line, prefix + "decode_tokens", "must be >= 1");
    if (t.tool_name.has_value() != t.tool_duration_s.has_value()) {
      throw TraceError(line, prefix + (t.tool_name ? "tool_duration_s" : "tool_name"),
                       "tool_name and tool_duration_s must appear together");
    }
    if (t.tool_duration_s && (!(*t.tool_duration_s >= 0.0) || !std::isfinite(*t.tool_duration_s))) {
      throw TraceError(line, prefix + "tool_duration_s", "must be a finite non-negative number");
    }
    const bool last = i + 1 == program.turns.size();
    if (last && t.has_tool()) {
      throw TraceError(line, prefix + "tool_name", "final turn must not call a tool");
    }
    if (!last && !t.has_tool()) {
      throw TraceError(line, prefix + "tool_name", "non-final turn must call a tool");
    }
  }
  if (program.total_tokens() > context_window) {
    throw TraceError(line, "turns",
                     "cumulative context " + std::to_string(program.total_tokens()) +
                         " exceeds context window " + std::to_string(context_window));
  }
}

Trace parse_trace(const std::string& text, std::uint64_t context_window) {
  Trace out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  ToolNameParser tool_parser;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw TraceError(line, "", std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) throw TraceError(line, "", "record must be an object");

    ProgramSpec p;
    if (!rec.contains("program_id") || !rec["program_id"].is_string()) {
      throw TraceError(line, "program_id", "missing or not a string");
    }
    p.program_id = rec["program_id"].get<std::string>();
    if (!rec.contains("arrival_time_s") || !rec["arrival_time_s"].is_number()) {
      throw TraceError(line, "arrival_time_s", "missing or not a number");
    }
    p.arrival_time_s = rec["arrival_time_s"].get<double>();
    if (!rec.contains("turns") || !rec["turns"].is_array()) {
      throw TraceError(line, "turns", "missing or not an array");
    }
    std::size_t i = 0;
    for (const json& jt : rec["turns"]) {
      const std::string prefix = "turns[" + std::to_string(i++) + "].";
      if (!jt.is_object()) throw TraceError(line, prefix, "turn must be an object");
      TurnSpec t;
      t.new_prompt_tokens = read_count(jt, "new_prompt_tokens", line, prefix);
      t.decode_tokens = read_count(jt, "decode_tokens", line, prefix);
      if (jt.contains("tool_name")) {
        if (!jt["tool_name"].is_string()) throw TraceError(line, prefix + "tool_name", "not a string");
        t.tool_name = jt["tool_name"].get<std::string>();
      } else if (jt.contains("tool_call") && jt["tool_call"].is_string()) {
        // Recorded model output instead of a resolved label.
        t.tool_name = tool_parser.parse(ToolCallMessage{jt["tool_call"].get<std::string>()});
      }
      if (jt.contains("tool_duration_s")) {
        if (!jt["tool_duration_s"].is_number()) {
          throw TraceError(line, prefix + "tool_duration_s", "not a number");
        }
        t.tool_duration_s = jt["tool_duration_s"].get<double>();
      }
      p.turns.push_back(std::move(t));
    }
    validate_program(p, context_window, line);
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const ProgramSpec& a, const ProgramSpec& b) {
    return a.arrival_time_s < b.arrival_time_s;
  });
  std::unordered_set<std::string> seen;
  for (const auto& p : out) {
    if (!seen.insert(p.program_id).second) {
      throw TraceError(0, "program_id", "duplicate id '" + p.program_id + "'");
    }
  }
  return out;
}

Trace load_trace(const std::filesystem::path& path, std::uint64_t context_window) {
  std::ifstream in(path);
  if (!in) throw TraceError(0, "", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), context_window);
}

std::string serialize_program(const ProgramSpec& program) {
  json turns = json::array();
  for (const auto& t : program.turns) {
    json jt = {{"new_prompt_tokens", t.new_prompt_tokens}, {"decode_tokens", t.decode_tokens}};
    if (t.tool_name) jt["tool_name"] = *t.tool_name;
    if (t.tool_duration_s) jt["tool_duration_s"] = *t.tool_duration_s;
    turns.push_back(std::move(jt));
  }
  json rec = {{"program_id", program.program_id},
              {"arrival_time_s", program.arrival_time_s},
              {"turns", std::move(turns)}};
  return rec.dump();
}

std::string serialize_trace(const Trace& trace) {
  std::string out;
  for (const auto& p : trace) {
    out += serialize_program(p);
    out += '\n';
  }
  return out;
}

void save_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError(0, "", "cannot write " + path.string());
  out << serialize_trace(trace);
}

std::string trace_hash(const Trace& trace) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize_trace(trace)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace agentsim::workload
