#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace cachesched {

// Exact fraction with 64-bit numerator/denominator, always normalized
// (gcd 1, positive denominator). Arithmetic is carried in 128 bits and
// throws std::overflow_error if the reduced result does not fit.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  // "n" for integers, "n/d" otherwise.
  std::string to_string() const;

  // Best rational approximation of `value` with denominator <= max_den.
  static Rational approximate(double value, std::int64_t max_den);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace cachesched
