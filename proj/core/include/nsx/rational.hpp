#pragma once

#include <cstdint>
#include <string>

#include "nsx/error.hpp"

namespace nsx {

// Exact rational arithmetic on 64-bit numerator/denominator with 128-bit
// intermediates.  Always normalized: gcd(num, den) = 1 and den > 0.  Throws
// OverflowError instead of silently wrapping; the desk-scale sweeps stay far
// below the limits.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(int64_t num, int64_t den);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // throws Error on divide by zero
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const;
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  Rational abs() const { return num_ < 0 ? -*this : *this; }
  int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }
  bool is_zero() const { return num_ == 0; }

  std::string to_string() const;
  static Rational parse(const std::string& text);  // "a/b" or "a"

  // 1/n for n >= 1.
  static Rational inv(int64_t n);
  // 2^-e exactly, for 0 <= e <= 62.
  static Rational pow2_inv(int e);

 private:
  int64_t num_;
  int64_t den_;
};

}  // namespace nsx
