#pragma once

#include <random>
#include <string>
#include <string_view>
#include <variant>

namespace agentsim::workload {

struct Constant { double value; };
struct Uniform { double lo, hi; };
struct Exponential { double mean; };
struct LogNormal { double mu, sigma; };    // parameters of the underlying normal
struct Geometric { double mean; };         // support {1, 2, ...}
struct TwoPoint { double a, b, p_a; };     // a with probability p_a, else b

/// A named sampling distribution, written in configs as "kind:p1:p2...",
/// e.g. "constant:0.1", "uniform:0:10", "lognormal:2.0:0.6", "geometric:120",
/// "exponential:3", "twopoint:0.1:1.9:0.5".
class Distribution {
 public:
  using Variant = std::variant<Constant, Uniform, Exponential, LogNormal, Geometric, TwoPoint>;

  Distribution() : v_(Constant{0.0}) {}
  /// Throws ConfigError on bad parameters.
  explicit Distribution(Variant v);

  static Distribution parse(std::string_view text);

  double sample(std::mt19937_64& rng) const;
  double mean() const;
  std::string to_string() const;
  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

}  // namespace agentsim::workload
