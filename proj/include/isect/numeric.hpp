#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

#include "isect/error.hpp"

namespace isect {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "a/b", or "a" when the denominator is one.
inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

inline BigInt floor(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt quo = num / den;  // truncates toward zero
  if (num < 0 && quo * den != num) quo -= 1;
  return quo;
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Binomial with a possibly negative upper argument, C(n, k) = n(n-1)...(n-k+1)/k!.
inline BigInt binomial_general(std::int64_t n, std::int64_t k) {
  if (k < 0) return 0;
  BigInt r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

inline BigInt factorial(std::int64_t n) {
  BigInt r = 1;
  for (std::int64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt ipow(const BigInt& base, std::uint64_t e) {
  BigInt r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= base;
  return r;
}

/// q^e as a 64-bit value; throws TooLarge when the result would not fit.
inline std::uint64_t checked_pow(std::uint64_t q, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (q != 0 && r > UINT64_MAX / q) throw Error(Errc::TooLarge, "q^e overflows 64 bits");
    r *= q;
  }
  return r;
}

}  // namespace isect
