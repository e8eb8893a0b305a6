#pragma once

// Exact exponent and index arithmetic for L^p Dolbeault cohomology of
// homogeneous cones. Everything here is rational; floating point never
// enters, because all of the band boundaries sit at rational p.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpd/rational.hpp"

namespace lpd {

/// A Lebesgue exponent p in [1, inf]: an exact rational >= 1 or infinity.
class Exponent {
 public:
  static Exponent infinity() { return Exponent(); }
  /// Throws std::invalid_argument when value < 1.
  static Exponent finite(Rational value);
  static Exponent finite(std::int64_t num, std::int64_t den = 1) {
    return finite(Rational(num, den));
  }

  bool is_infinite() const { return infinite_; }
  bool is_one() const { return !infinite_ && value_ == Rational(1); }
  /// Throws std::logic_error for the infinite exponent.
  const Rational& value() const;
  /// 1/p, with 1/inf = 0.
  Rational reciprocal() const { return infinite_ ? Rational(0) : 1 / value_; }
  /// Lossy; only for numerics downstream.
  double to_double() const;
  std::string str() const { return infinite_ ? "inf" : to_string(value_); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

 private:
  Exponent() = default;
  explicit Exponent(Rational v) : infinite_(false), value_(v) {}

  bool infinite_ = true;
  Rational value_{1};
};

/// Grammar: "inf" | INT | INT "/" INT, no whitespace, value >= 1.
Exponent parse_exponent(std::string_view text);

/// Throws std::invalid_argument unless d >= 2 and 1 <= q <= d.
void check_degree(int q, int d);

/// 1 + q - 2d/p, the quantity every index in this module is built from.
Rational index_threshold(const Exponent& p, int q, int d);

/// Lower summation index of the sufficient condition (upper bound on dim).
std::int64_t a_index(const Exponent& p, int q, int d);

/// Lower summation index of the necessary condition (lower bound on dim).
std::int64_t c_index(const Exponent& p, int q, int d);

/// The dbar-weight k(p, s): largest m with |z|^s L^p_loc in |z|^m L^1_loc
/// in one complex variable.
std::int64_t dbar_weight(const Exponent& p, const Rational& s);

/// s = (q-1) - (2d-2)/p, the weight carried by the pulled-back form.
Rational pullback_exponent(const Exponent& p, int q, int d);

/// w(P) = 2/P - 1 on [1,2], 0 on [2,inf].
Rational w_exponent(const Exponent& P);

/// P' with 1/P + 1/P' = 1.
Exponent holder_conjugate(const Exponent& P);

/// Admissible shifts nu in (0, upper) or (0, upper] with
/// dbar_weight(p, s + nu) = c_index(p, q, d).
struct NuInterval {
  Rational upper;
  bool upper_inclusive = false;

  Rational default_nu() const { return upper / 2; }
  bool contains(const Rational& nu) const {
    return nu > 0 && (upper_inclusive ? nu <= upper : nu < upper);
  }
};

NuInterval nu_interval(const Exponent& p, int q, int d);

/// All p in [1, inf) where a_index or c_index can jump, ascending.
std::vector<Rational> breakpoints(int q, int d);

struct IndexBundle {
  Exponent p = Exponent::infinity();
  int q = 1;
  int d = 2;
  std::int64_t a = 0;
  std::int64_t c = 0;
  Rational s;
  std::int64_t k_of_s = 0;
  Rational w;
  NuInterval nu;
  std::vector<Rational> breakpoints;
};

IndexBundle make_index_bundle(const Exponent& p, int q, int d);

}  // namespace lpd
