#include "nsx/rational.hpp"

#include <numeric>

namespace nsx {

namespace {

using i128 = __int128;

int64_t checked_narrow(i128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError(what);
  return static_cast<int64_t>(v);
}

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked_narrow(n, "constructor numerator");
  den_ = checked_narrow(d, "constructor denominator");
}

Rational Rational::operator+(const Rational& o) const {
  i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
  i128 d = i128(den_) * o.den_;
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n, "addition");
  r.den_ = checked_narrow(d, "addition");
  return r;
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  i128 n = i128(num_) * o.num_;
  i128 d = i128(den_) * o.den_;
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n, "multiplication");
  r.den_ = checked_narrow(d, "multiplication");
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw Error("rational division by zero");
  Rational inv;
  i128 n = o.den_, d = o.num_;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  inv.num_ = checked_narrow(n, "division");
  inv.den_ = checked_narrow(d, "division");
  return *this * inv;
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

bool Rational::operator<(const Rational& o) const {
  return i128(num_) * o.den_ < i128(o.num_) * den_;
}

bool Rational::operator<=(const Rational& o) const {
  return i128(num_) * o.den_ <= i128(o.num_) * den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(text));
  return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

Rational Rational::inv(int64_t n) {
  if (n <= 0) throw Error("inv expects a positive integer");
  return Rational(1, n);
}

Rational Rational::pow2_inv(int e) {
  if (e < 0 || e > 62) throw OverflowError("pow2_inv exponent");
  return Rational(1, int64_t(1) << e);
}

}  // namespace nsx
