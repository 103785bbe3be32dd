#include "nsx/realfn.hpp"

#include "nsx/error.hpp"

namespace nsx {

RealFn RealFn::constant(Rational c) {
  RealFn f;
  f.c0_ = c;
  f.name_ = c.to_string();
  return f;
}

RealFn RealFn::identity() {
  RealFn f;
  f.c1_ = Rational(1);
  f.name_ = "x";
  return f;
}

RealFn RealFn::linear(Rational slope, Rational shift) {
  RealFn f;
  f.c1_ = slope;
  f.c0_ = shift;
  f.name_ = slope.to_string() + "x+" + shift.to_string();
  return f;
}

RealFn RealFn::quadratic(Rational a2, Rational a1, Rational a0) {
  RealFn f;
  f.c2_ = a2;
  f.c1_ = a1;
  f.c0_ = a0;
  f.name_ = a2.to_string() + "x^2+" + a1.to_string() + "x+" + a0.to_string();
  return f;
}

Rational RealFn::operator()(const Rational& x) const { return c0_ + c1_ * x + c2_ * x * x; }

RealFn RealFn::named(std::string n) const {
  RealFn f = *this;
  f.name_ = std::move(n);
  return f;
}

bool RealCode::well_formed(int nMax, int iMax) const {
  for (int n = 0; n <= nMax; ++n) {
    Rational qn = approximant(n);
    Rational bound = Rational::pow2_inv(n > 62 ? 62 : n);
    for (int i = 1; i <= iMax; ++i) {
      if (!((qn - approximant(n + i)).abs() < bound)) return false;
    }
  }
  return true;
}

void Partition::validate() const {
  if (points.size() < 2) throw NotPartition("fewer than two breakpoints");
  if (tags.size() != points.size() - 1)
    throw NotPartition("tag count does not match cell count");
  if (points.front() != Rational(0) || points.back() != Rational(1))
    throw NotPartition("breakpoints must span [0,1]");
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1])) throw NotPartition("breakpoints not increasing");
    if (tags[i] < points[i] || points[i + 1] < tags[i])
      throw NotPartition("tag outside its cell");
  }
}

Rational Partition::mesh() const {
  Rational m(0);
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    Rational w = points[i + 1] - points[i];
    if (m < w) m = w;
  }
  return m;
}

Partition Partition::uniform(int n, TagRule rule) {
  if (n <= 0) throw NotPartition("uniform partition needs at least one cell");
  Partition p;
  for (int i = 0; i <= n; ++i) p.points.push_back(Rational(i, n));
  for (int i = 0; i < n; ++i) {
    bool left = rule == TagRule::Left || (rule == TagRule::Alternate && i % 2 == 0);
    p.tags.push_back(left ? p.points[i] : p.points[i + 1]);
  }
  return p;
}

Partition Partition::uniform_pattern(int n, unsigned pattern) {
  if (n <= 0) throw NotPartition("uniform partition needs at least one cell");
  Partition p;
  for (int i = 0; i <= n; ++i) p.points.push_back(Rational(i, n));
  for (int i = 0; i < n; ++i)
    p.tags.push_back((pattern >> i) & 1u ? p.points[i + 1] : p.points[i]);
  return p;
}

std::string Partition::to_string() const {
  std::string s = "[";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i) s += " ";
    s += points[i].to_string();
    if (i < tags.size()) s += " t=" + tags[i].to_string();
  }
  return s + "]";
}

RealFn parse_realfn(const std::string& spec) {
  // Named forms first.
  if (spec == "x") return RealFn::identity();
  if (spec == "2x") return RealFn::linear(Rational(2), Rational(0)).named(spec);
  if (spec == "x/2") return RealFn::linear(Rational(1, 2), Rational(0)).named(spec);
  if (spec == "2x-1") return RealFn::linear(Rational(2), Rational(-1)).named(spec);
  if (spec == "x-1/2") return RealFn::linear(Rational(1), Rational(-1, 2)).named(spec);
  if (spec == "x^2-1/2")
    return RealFn::quadratic(Rational(1), Rational(0), Rational(-1, 2)).named(spec);
  // a*x+b with rational a, b: "a x + b" written as A*x+B or Ax+B.
  auto xpos = spec.find('x');
  if (xpos != std::string::npos) {
    std::string a = spec.substr(0, xpos);
    if (!a.empty() && a.back() == '*') a.pop_back();
    std::string b = spec.substr(xpos + 1);
    Rational slope = a.empty() ? Rational(1) : (a == "-" ? Rational(-1) : Rational::parse(a));
    Rational shift(0);
    if (!b.empty()) {
      if (b[0] == '+') b.erase(0, 1);
      shift = Rational::parse(b);
    }
    return RealFn::linear(slope, shift).named(spec);
  }
  return RealFn::constant(Rational::parse(spec)).named(spec);
}

Rational riemann_sum(const RealFn& f, const Partition& pi) {
  pi.validate();
  Rational sum(0);
  for (size_t i = 0; i < pi.tags.size(); ++i)
    sum += f(pi.tags[i]) * (pi.points[i + 1] - pi.points[i]);
  return sum;
}

}  // namespace nsx
