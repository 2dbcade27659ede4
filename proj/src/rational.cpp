#include "cachesched/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cachesched {

namespace {

__int128 wide_gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("Rational: division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || num < -kMax || den > kMax) throw std::overflow_error("Rational: 64-bit overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::approximate(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) throw std::domain_error("Rational::approximate: non-finite value");
  if (max_den < 1) throw std::invalid_argument("Rational::approximate: max_den < 1");
  const bool negative = value < 0;
  double x = std::fabs(value);

  // Convergents p/q of the continued fraction; stop before q exceeds max_den,
  // then consider the best semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    double a_real = std::floor(rem);
    if (a_real > 4e18) break;
    auto a = static_cast<std::int64_t>(a_real);
    __int128 q2 = static_cast<__int128>(a) * q1 + q0;
    if (q2 > max_den) {
      std::int64_t k = (max_den - q0) / q1;
      std::int64_t ps = k * p1 + p0, qs = k * q1 + q0;
      double err_semi = std::fabs(x - static_cast<double>(ps) / static_cast<double>(qs));
      double err_conv = std::fabs(x - static_cast<double>(p1) / static_cast<double>(q1));
      if (err_semi < err_conv) {
        p1 = ps;
        q1 = qs;
      }
      break;
    }
    __int128 p2 = static_cast<__int128>(a) * p1 + p0;
    if (p2 > std::numeric_limits<std::int64_t>::max()) break;
    p0 = p1;
    q0 = q1;
    p1 = static_cast<std::int64_t>(p2);
    q1 = static_cast<std::int64_t>(q2);
    double frac = rem - a_real;
    if (frac < 1e-15) break;
    rem = 1.0 / frac;
  }
  if (q1 == 0) return Rational(static_cast<std::int64_t>(std::llround(value)));
  return Rational(negative ? -p1 : p1, q1);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace cachesched
