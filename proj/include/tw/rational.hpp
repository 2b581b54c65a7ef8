#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "tw/errors.hpp"

namespace tw {

/// Exact rational with int64 numerator/denominator. Used for grid and
/// Cantor-construction endpoints so admissibility checks are exact.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    require(den != 0, Err::Internal, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  static long long checked(__int128 v) {
    require(v <= INT64_MAX && v >= INT64_MIN, Err::Internal, "rational overflow");
    return static_cast<long long>(v);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rat r;
    r.num = checked(n);
    r.den = checked(d);
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.num, b.den); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num * b.num;
    __int128 d = (__int128)a.den * b.den;
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rat r;
    r.num = checked(n);
    r.den = checked(d);
    return r;
  }
  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Exact test of double == rational. Every finite double is a rational
/// m·2^e; compare cross products in 128-bit arithmetic.
inline bool rat_equals_double(const Rat& r, double d) {
  if (!std::isfinite(d)) return false;
  if (d == 0.0) return r.num == 0;
  int e = 0;
  double m = std::frexp(d, &e);  // d = m * 2^e, 0.5 <= |m| < 1
  long long mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;  // d = mi * 2^e exactly
  // Require r.num * 2^{-e} == mi * r.den   (when e <= 0)
  //         r.num == mi * 2^{e} * r.den    (when e > 0)
  if (e <= 0) {
    int k = -e;
    if (k > 110) return r.num == 0 && mi == 0;
    __int128 lhs = (__int128)r.num;
    for (int i = 0; i < k; ++i) {
      lhs <<= 1;
      if (lhs > ((__int128)1 << 120) || lhs < -((__int128)1 << 120)) return false;
    }
    return lhs == (__int128)mi * r.den;
  }
  if (e > 60) return false;  // |d| >= 2^113/den, out of range of int64 rationals
  return (__int128)r.num == ((__int128)mi << e) * r.den;
}

inline Rat pow_rat(long long base, int exp) {
  // base^exp with exp possibly negative
  long long p = 1;
  int a = exp < 0 ? -exp : exp;
  for (int i = 0; i < a; ++i) {
    require(p <= INT64_MAX / base, Err::Internal, "rational power overflow");
    p *= base;
  }
  return exp >= 0 ? Rat(p) : Rat(1, p);
}

}  // namespace tw
