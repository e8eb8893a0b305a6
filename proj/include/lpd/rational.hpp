#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace lpd {

// Compare against Rational(n), never a bare integer: with Boost 1.74 the
// mixed == / != overloads recurse forever under C++20 rewritten operators.
using Rational = boost::rational<std::int64_t>;

inline bool is_integer(const Rational& x) { return x.denominator() == 1; }

inline std::int64_t floor(const Rational& x) {
  const std::int64_t n = x.numerator();
  const std::int64_t d = x.denominator();  // normalized: d > 0
  std::int64_t q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

inline std::int64_t ceil(const Rational& x) { return -floor(-x); }

/// max{k in Z : k < x}
inline std::int64_t max_integer_below(const Rational& x) {
  return is_integer(x) ? x.numerator() - 1 : floor(x);
}

/// max{k in Z : k <= x}
inline std::int64_t max_integer_at_most(const Rational& x) { return floor(x); }

inline std::string to_string(const Rational& x) {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

inline double to_double(const Rational& x) {
  return boost::rational_cast<double>(x);
}

}  // namespace lpd
