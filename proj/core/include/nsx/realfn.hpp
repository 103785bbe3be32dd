#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsx/rational.hpp"

namespace nsx {

// Rational-evaluable function expressions c0 + c1*x + c2*x^2: enough for the
// bundled suites, exact at every rational point.
class RealFn {
 public:
  RealFn() = default;
  static RealFn constant(Rational c);
  static RealFn identity();
  static RealFn linear(Rational slope, Rational shift);     // slope*x + shift
  static RealFn quadratic(Rational a2, Rational a1, Rational a0);

  Rational operator()(const Rational& x) const;
  const std::string& name() const { return name_; }
  RealFn named(std::string n) const;

 private:
  Rational c0_, c1_, c2_;
  std::string name_;
};

// The fast-converging Cauchy representation of a real: approximant q with
// |q(n) - q(n+i)| < 2^-n on every tested index pair.
struct RealCode {
  std::function<Rational(int)> approximant;

  static RealCode of(const Rational& q) {
    return RealCode{[q](int) { return q; }};
  }
  // Checks the representation invariant on indices up to nMax (i up to iMax).
  bool well_formed(int nMax, int iMax = 8) const;
  Rational at(int n) const { return approximant(n); }
};

// A tagged partition of [0,1]: breakpoints 0 = x_0 < x_1 < ... < x_M = 1 and
// tags t_i in [x_i, x_{i+1}].
struct Partition {
  std::vector<Rational> points;  // includes both endpoints
  std::vector<Rational> tags;    // size = points.size() - 1

  // Throws NotPartition unless increasing in [0,1] with tags in their cells.
  void validate() const;
  Rational mesh() const;
  size_t cells() const { return tags.size(); }

  // The uniform partition with n cells and a tag rule.
  enum class TagRule { Left, Right, Alternate };
  static Partition uniform(int n, TagRule rule);
  // Uniform breakpoints with an arbitrary tag pattern: bit i picks left/right
  // for cell i.
  static Partition uniform_pattern(int n, unsigned pattern);

  std::string to_string() const;
};

// S_pi(f): the exact Riemann sum.
Rational riemann_sum(const RealFn& f, const Partition& pi);

// Parses the small function language used on the command line: "x", "2x",
// "x/2", "ax+b", "x^2+c", and plain rational constants.
RealFn parse_realfn(const std::string& spec);

}  // namespace nsx
