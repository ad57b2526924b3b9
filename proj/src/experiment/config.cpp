#include "agentsim/experiment/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "agentsim/baselines/policies.hpp"

namespace agentsim::experiment {

namespace pt = boost::property_tree;

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warn: return "warn";
    case Severity::Error: return "error";
  }
  return "?";
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double to_double(const std::string& s) {
  const std::string t = boost::trim_copy(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  const std::string t = boost::trim_copy(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("not a non-negative integer: '" + s + "'");
  }
  return v;
}

std::uint32_t to_u32(const std::string& s) {
  const std::uint64_t v = to_u64(s);
  if (v > 0xffffffffULL) throw ConfigError("integer out of range: '" + s + "'");
  return static_cast<std::uint32_t>(v);
}

bool to_bool(const std::string& s) {
  const std::string t = boost::to_lower_copy(boost::trim_copy(s));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

template <class T, class F>
std::vector<T> map_list(const std::string& s, F f) {
  std::vector<T> out;
  for (const auto& p : split_list(s)) out.push_back(f(p));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += f(v[i]);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define AS_FIELD(SEC, KEY, EXPR, PARSE, PRINT)                                          \
  Field {                                                                               \
    SEC, KEY, [](ExperimentConfig& c, const std::string& v) { c.EXPR = PARSE(v); },     \
        [](const ExperimentConfig& c) { return PRINT(c.EXPR); }                         \
  }

std::string u64_str(std::uint64_t v) { return std::to_string(v); }
std::string bool_str(bool v) { return v ? "true" : "false"; }
std::string dist_str(const workload::Distribution& d) { return d.to_string(); }
workload::Distribution to_dist(const std::string& s) {
  return workload::Distribution::parse(boost::trim_copy(s));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      Field{"experiment", "policies",
            [](ExperimentConfig& c, const std::string& v) { c.policies = split_list(v); },
            [](const ExperimentConfig& c) {
              return join(c.policies, [](const std::string& s) { return s; });
            }},
      Field{"experiment", "rate_multipliers",
            [](ExperimentConfig& c, const std::string& v) {
              c.rate_multipliers = map_list<double>(v, to_double);
            },
            [](const ExperimentConfig& c) { return join(c.rate_multipliers, fmt_double); }},
      Field{"experiment", "seeds",
            [](ExperimentConfig& c, const std::string& v) { c.seeds = map_list<std::uint64_t>(v, to_u64); },
            [](const ExperimentConfig& c) { return join(c.seeds, u64_str); }},
      Field{"experiment", "turn_scaling",
            [](ExperimentConfig& c, const std::string& v) {
              c.turn_scaling = map_list<std::uint32_t>(v, to_u32);
            },
            [](const ExperimentConfig& c) { return join(c.turn_scaling, u64_str); }},
      Field{"experiment", "baseline",
            [](ExperimentConfig& c, const std::string& v) { c.baseline = boost::trim_copy(v); },
            [](const ExperimentConfig& c) { return c.baseline; }},
      Field{"experiment", "output_dir",
            [](ExperimentConfig& c, const std::string& v) { c.output_dir = boost::trim_copy(v); },
            [](const ExperimentConfig& c) { return c.output_dir.string(); }},
      AS_FIELD("experiment", "workers", workers, to_u32, u64_str),
      AS_FIELD("experiment", "audit_log", audit_log, to_bool, bool_str),

      Field{"trace", "file",
            [](ExperimentConfig& c, const std::string& v) { c.trace_file = boost::trim_copy(v); },
            [](const ExperimentConfig& c) {
              return c.trace_file ? c.trace_file->string() : std::string();
            }},
      AS_FIELD("trace", "num_programs", synthetic.num_programs, to_u32, u64_str),
      AS_FIELD("trace", "arrival_rate", synthetic.arrival_rate_jobs_per_s, to_double, fmt_double),
      AS_FIELD("trace", "turns", synthetic.turns, to_dist, dist_str),
      AS_FIELD("trace", "max_turns", synthetic.max_turns, to_u32, u64_str),
      AS_FIELD("trace", "first_prompt_tokens", synthetic.first_prompt_tokens, to_dist, dist_str),
      AS_FIELD("trace", "new_prompt_tokens", synthetic.new_prompt_tokens, to_dist, dist_str),
      AS_FIELD("trace", "decode_tokens", synthetic.decode_tokens, to_dist, dist_str),
      AS_FIELD("trace", "context_window", synthetic.context_window, to_u64, u64_str),
      AS_FIELD("trace", "token_scale", synthetic.token_scale, to_double, fmt_double),

      AS_FIELD("engine", "prefill_rate", sim.engine.prefill_rate_tokens_per_s, to_double, fmt_double),
      AS_FIELD("engine", "decode_time", sim.engine.decode_time_per_iteration_s, to_double, fmt_double),
      AS_FIELD("engine", "decode_time_per_seq", sim.engine.decode_time_per_sequence_s, to_double,
               fmt_double),
      AS_FIELD("engine", "max_batch_requests", sim.engine.max_batch_requests, to_u32, u64_str),
      AS_FIELD("engine", "max_batch_tokens", sim.engine.max_batch_tokens_per_iteration, to_u64,
               u64_str),
      AS_FIELD("engine", "chunked_prefill", sim.engine.chunked_prefill, to_bool, bool_str),
      AS_FIELD("engine", "preemption", sim.engine.preemption, to_bool, bool_str),

      AS_FIELD("memory", "gpu_blocks", sim.memory.gpu_capacity_blocks, to_u64, u64_str),
      AS_FIELD("memory", "block_size", sim.memory.block_size_tokens, to_u64, u64_str),
      AS_FIELD("memory", "dram_blocks", sim.memory.dram_capacity_blocks, to_u64, u64_str),
      AS_FIELD("memory", "swap_bandwidth", sim.memory.swap_bandwidth_blocks_per_s, to_double,
               fmt_double),

      AS_FIELD("estimator", "delta", sim.estimator.delta, to_double, fmt_double),
      AS_FIELD("estimator", "n_threshold", sim.estimator.per_tool_threshold, to_u64, u64_str),
      AS_FIELD("estimator", "t_default", sim.estimator.t_default_s, to_double, fmt_double),
      AS_FIELD("estimator", "b", sim.estimator.interval_upper_bound_s, to_double, fmt_double),
      AS_FIELD("estimator", "alpha", sim.estimator.alpha, to_double, fmt_double),
      AS_FIELD("estimator", "ttl_max", sim.estimator.ttl_max_s, to_double, fmt_double),
      AS_FIELD("estimator", "t_thresh", sim.estimator.t_thresh_s, to_double, fmt_double),
      AS_FIELD("estimator", "t_pin", sim.estimator.t_pin_s, to_double, fmt_double),

      Field{"scheduler", "deadlock_trigger",
            [](ExperimentConfig& c, const std::string& v) {
              c.sim.scheduler.deadlock_trigger =
                  sched::parse_deadlock_trigger(boost::trim_copy(v));
            },
            [](const ExperimentConfig& c) {
              return std::string(sched::to_string(c.sim.scheduler.deadlock_trigger));
            }},
  };
  return f;
}

#undef AS_FIELD

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

// Applies the tree to `cfg`. Errors go to `diags` when given, else throw.
void apply_tree(const pt::ptree& tree, const std::filesystem::path& base_dir,
                ExperimentConfig& cfg, std::vector<Diagnostic>* diags) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    if (!diags) throw ConfigError(key + ": " + msg);
    diags->push_back({Severity::Error, key, msg});
  };

  std::set<std::string> seen;
  std::vector<workload::ToolSpec> tools;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      fail(section, "key outside of any section");
      continue;
    }
    if (boost::starts_with(section, "tool.")) {
      workload::ToolSpec tool;
      tool.name = section.substr(5);
      if (tool.name.empty()) fail(section, "empty tool name");
      bool has_duration = false;
      for (const auto& [key, val] : body) {
        const std::string full = section + "." + key;
        try {
          if (key == "duration") {
            tool.duration = to_dist(val.data());
            has_duration = true;
          } else if (key == "weight") {
            tool.weight = to_double(val.data());
          } else {
            fail(full, "unknown key");
          }
        } catch (const std::exception& e) {
          fail(full, e.what());
        }
      }
      if (!has_duration) fail(section, "tool needs a duration");
      tools.push_back(std::move(tool));
      continue;
    }
    for (const auto& [key, val] : body) {
      const std::string full = section + "." + key;
      const Field* f = find_field(section, key);
      if (!f) {
        fail(full, "unknown key");
        continue;
      }
      seen.insert(full);
      try {
        f->set(cfg, val.data());
      } catch (const std::exception& e) {
        fail(full, e.what());
      }
    }
  }
  const bool custom_tools = !tools.empty();
  if (custom_tools) cfg.synthetic.tools = std::move(tools);
  if (cfg.trace_file && cfg.trace_file->is_relative()) cfg.trace_file = base_dir / *cfg.trace_file;
  cfg.synthetic.context_window = std::max<std::uint64_t>(cfg.synthetic.context_window, 1);

  if (diags) {
    for (const auto& f : fields()) {
      const std::string full = f.section + "." + f.key;
      if (!seen.count(full)) {
        const std::string value = f.get(cfg);
        diags->push_back({Severity::Info, full, value.empty() ? "unset" : "default " + value});
      }
    }
    if (!custom_tools && !cfg.trace_file) {
      diags->push_back({Severity::Info, "tool.*", "default tool catalog"});
    }
  }
}

pt::ptree read_tree(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

}  // namespace

void check_config(const ExperimentConfig& cfg, std::vector<Diagnostic>& diags) {
  auto guard = [&](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      diags.push_back({Severity::Error, key, e.what()});
    }
  };
  if (cfg.policies.empty()) diags.push_back({Severity::Error, "experiment.policies", "no policies"});
  for (const auto& p : cfg.policies) {
    guard("experiment.policies", [&] { baselines::make_policy(p, cfg.sim.engine, cfg.sim.memory); });
  }
  if (std::find(cfg.policies.begin(), cfg.policies.end(), cfg.baseline) == cfg.policies.end()) {
    diags.push_back({Severity::Warn, "experiment.baseline",
                     "'" + cfg.baseline + "' is not in the policy list; comparisons use '" +
                         (cfg.policies.empty() ? std::string() : cfg.policies.front()) + "'"});
  }
  if (cfg.rate_multipliers.empty()) {
    diags.push_back({Severity::Error, "experiment.rate_multipliers", "no rates"});
  }
  for (double r : cfg.rate_multipliers) {
    if (!(r > 0.0)) {
      diags.push_back({Severity::Error, "experiment.rate_multipliers", "rates must be > 0"});
    }
  }
  if (cfg.seeds.empty()) diags.push_back({Severity::Error, "experiment.seeds", "no seeds"});
  for (auto k : cfg.turn_scaling) {
    if (k < 1) diags.push_back({Severity::Error, "experiment.turn_scaling", "factors must be >= 1"});
  }
  if (cfg.workers < 1) diags.push_back({Severity::Error, "experiment.workers", "must be >= 1"});

  guard("engine", [&] { cfg.sim.engine.validate(); });
  guard("memory", [&] { cfg.sim.memory.validate(); });
  guard("estimator", [&] { cfg.sim.estimator.validate(); });

  if (cfg.trace_file) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(*cfg.trace_file, ec)) {
      diags.push_back({Severity::Error, "trace.file",
                       "trace file not found: " + cfg.trace_file->string()});
    } else {
      guard("trace.file", [&] { workload::load_trace(*cfg.trace_file, cfg.synthetic.context_window); });
    }
  } else {
    guard("trace", [&] { cfg.synthetic.validate(); });
  }

  std::error_code ec;
  std::filesystem::path probe = std::filesystem::absolute(cfg.output_dir, ec);
  while (!probe.empty() && !std::filesystem::exists(probe, ec)) {
    if (probe == probe.parent_path()) break;
    probe = probe.parent_path();
  }
  if (!std::filesystem::is_directory(probe, ec)) {
    diags.push_back({Severity::Error, "experiment.output_dir",
                     "no existing ancestor directory for " + cfg.output_dir.string()});
  }
}

std::string ExperimentConfig::effective_text() const {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out << "\n";
      section = f.section;
      out << "[" << section << "]\n";
    }
    const std::string value = f.get(*this);
    if (value.empty()) {
      out << "; " << f.key << " unset\n";
    } else {
      out << f.key << " = " << value << "\n";
    }
  }
  if (!trace_file) {
    for (const auto& t : synthetic.tools) {
      out << "\n[tool." << t.name << "]\nduration = " << t.duration.to_string()
          << "\nweight = " << fmt_double(t.weight) << "\n";
    }
  }
  return out.str();
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  apply_tree(read_tree(text), base_dir, cfg, nullptr);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::vector<Diagnostic> validate_config_text(const std::string& text,
                                             const std::filesystem::path& base_dir) {
  std::vector<Diagnostic> diags;
  ExperimentConfig cfg;
  pt::ptree tree;
  try {
    tree = read_tree(text);
  } catch (const std::exception& e) {
    diags.push_back({Severity::Error, "(file)", e.what()});
    return diags;
  }
  apply_tree(tree, base_dir, cfg, &diags);
  check_config(cfg, diags);
  return diags;
}

std::vector<Diagnostic> validate_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {{Severity::Error, "(file)", "cannot open config " + path.string()}};
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_config_text(ss.str(), path.parent_path());
}

}  // namespace agentsim::experiment
