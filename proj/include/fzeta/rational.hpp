#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "fzeta/common.hpp"

namespace fzeta {

// Exact rational on int64, always normalized with positive denominator.
// Cantor contraction ratios and JSON descriptor numbers stay exact until an
// evaluation boundary converts them to binary64.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(std::llabs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool positive() const { return num > 0; }
  bool is_zero() const { return num == 0; }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(checked_mul(a.num, b.den) + checked_mul(b.num, a.den),
                    checked_mul(a.den, b.den));
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(checked_mul(a.num, b.den) - checked_mul(b.num, a.den),
                    checked_mul(a.den, b.den));
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw domain_error("Rational: division by zero");
    return Rational(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
  }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Rational a, Rational b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(Rational a, Rational b) { return a == b || a < b; }

  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
      throw capacity_error("Rational: 64-bit overflow in exact arithmetic");
    return r;
  }

  Rational pow_u(unsigned e) const {
    Rational r(1);
    Rational base = *this;
    while (e) {
      if (e & 1u) r = r * base;
      base = base * base;
      e >>= 1u;
    }
    return r;
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p/q", integers, and plain decimal strings ("0.25", "-3.5e-2"
  // is not supported; descriptors use non-exponent decimals).
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const std::int64_t p = std::stoll(text.substr(0, slash));
      const std::int64_t q = std::stoll(text.substr(slash + 1));
      return Rational(p, q);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_digits = text.size() - dot - 1;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den = checked_mul(den, 10);
    return Rational(std::stoll(digits), den);
  }
};

}  // namespace fzeta
