#include "agentsim/workload/distribution.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "agentsim/common.hpp"

namespace agentsim::workload {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(double x) { return std::isfinite(x); }

// Shortest text that parses back to the same double.
std::string num(double x) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

Distribution::Distribution(Variant v) : v_(v) {
  std::visit(Overloaded{
                 [](const Constant& d) {
                   if (!finite(d.value) || d.value < 0) throw ConfigError("constant must be >= 0");
                 },
                 [](const Uniform& d) {
                   if (!finite(d.lo) || !finite(d.hi) || d.lo < 0 || d.hi < d.lo) {
                     throw ConfigError("uniform needs 0 <= lo <= hi");
                   }
                 },
                 [](const Exponential& d) {
                   if (!(d.mean > 0) || !finite(d.mean)) throw ConfigError("exponential mean must be > 0");
                 },
                 [](const LogNormal& d) {
                   if (!finite(d.mu) || !(d.sigma >= 0) || !finite(d.sigma)) {
                     throw ConfigError("lognormal needs finite mu and sigma >= 0");
                   }
                 },
                 [](const Geometric& d) {
                   if (!(d.mean >= 1) || !finite(d.mean)) throw ConfigError("geometric mean must be >= 1");
                 },
                 [](const TwoPoint& d) {
                   if (!finite(d.a) || !finite(d.b) || d.a < 0 || d.b < 0 || !(d.p_a >= 0) ||
                       !(d.p_a <= 1)) {
                     throw ConfigError("twopoint needs a, b >= 0 and p in [0,1]");
                   }
                 },
             },
             v_);
}

Distribution Distribution::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  parts.push_back(cur);
  const std::string& kind = parts[0];
  std::vector<double> p;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(parts[i], &used));
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("distribution '" + std::string(text) + "': bad number '" + parts[i] + "'");
    }
  }
  auto need = [&](std::size_t n) {
    if (p.size() != n) {
      throw ConfigError("distribution '" + std::string(text) + "': " + kind + " takes " +
                        std::to_string(n) + " parameter(s)");
    }
  };
  if (kind == "constant") { need(1); return Distribution(Constant{p[0]}); }
  if (kind == "uniform") { need(2); return Distribution(Uniform{p[0], p[1]}); }
  if (kind == "exponential") { need(1); return Distribution(Exponential{p[0]}); }
  if (kind == "lognormal") { need(2); return Distribution(LogNormal{p[0], p[1]}); }
  if (kind == "geometric") { need(1); return Distribution(Geometric{p[0]}); }
  if (kind == "twopoint") { need(3); return Distribution(TwoPoint{p[0], p[1], p[2]}); }
  throw ConfigError("unknown distribution kind '" + kind +
                    "' (constant, uniform, exponential, lognormal, geometric, twopoint)");
}

double Distribution::sample(std::mt19937_64& rng) const {
  return std::visit(
      Overloaded{
          [](const Constant& d) { return d.value; },
          [&](const Uniform& d) { return std::uniform_real_distribution<double>(d.lo, d.hi)(rng); },
          [&](const Exponential& d) { return std::exponential_distribution<double>(1.0 / d.mean)(rng); },
          [&](const LogNormal& d) { return std::lognormal_distribution<double>(d.mu, d.sigma)(rng); },
          [&](const Geometric& d) {
            if (d.mean <= 1.0) return 1.0;
            // std::geometric_distribution counts failures, so shift onto {1, 2, ...}.
            return 1.0 + static_cast<double>(std::geometric_distribution<long>(1.0 / d.mean)(rng));
          },
          [&](const TwoPoint& d) {
            return std::bernoulli_distribution(d.p_a)(rng) ? d.a : d.b;
          },
      },
      v_);
}

double Distribution::mean() const {
  return std::visit(Overloaded{
                        [](const Constant& d) { return d.value; },
                        [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                        [](const Exponential& d) { return d.mean; },
                        [](const LogNormal& d) { return std::exp(d.mu + 0.5 * d.sigma * d.sigma); },
                        [](const Geometric& d) { return d.mean; },
                        [](const TwoPoint& d) { return d.p_a * d.a + (1 - d.p_a) * d.b; },
                    },
                    v_);
}

std::string Distribution::to_string() const {
  return std::visit(
      Overloaded{
          [](const Constant& d) { return "constant:" + num(d.value); },
          [](const Uniform& d) { return "uniform:" + num(d.lo) + ":" + num(d.hi); },
          [](const Exponential& d) { return "exponential:" + num(d.mean); },
          [](const LogNormal& d) { return "lognormal:" + num(d.mu) + ":" + num(d.sigma); },
          [](const Geometric& d) { return "geometric:" + num(d.mean); },
          [](const TwoPoint& d) {
            return "twopoint:" + num(d.a) + ":" + num(d.b) + ":" + num(d.p_a);
          },
      },
      v_);
}

}  // namespace agentsim::workload
