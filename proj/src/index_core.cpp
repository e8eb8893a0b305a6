#include "lpd/index_core.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace lpd {

Exponent Exponent::finite(Rational value) {
  if (value < 1) {
    throw std::invalid_argument("exponent must be >= 1, got " + to_string(value));
  }
  return Exponent(value);
}

const Rational& Exponent::value() const {
  if (infinite_) throw std::logic_error("infinite exponent has no finite value");
  return value_;
}

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : lpd::to_double(value_);
}

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
  if (a.infinite_ || b.infinite_) {
    return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
  }
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("malformed exponent '" + std::string(whole) + "'");
  }
  return out;
}

}  // namespace

Exponent parse_exponent(std::string_view text) {
  if (text == "inf") return Exponent::infinity();
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Exponent::finite(Rational(parse_int(text, text)));
  }
  const std::int64_t num = parse_int(text.substr(0, slash), text);
  const std::int64_t den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Exponent::finite(Rational(num, den));
}

void check_degree(int q, int d) {
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2");
  if (q < 1 || q > d) throw std::invalid_argument("form degree q must satisfy 1 <= q <= d");
}

Rational index_threshold(const Exponent& p, int q, int d) {
  check_degree(q, d);
  return Rational(1 + q) - Rational(2 * d) * p.reciprocal();
}

std::int64_t a_index(const Exponent& p, int q, int d) {
  const Rational x = index_threshold(p, q, d);
  return p.is_one() ? max_integer_at_most(x) : max_integer_below(x);
}

std::int64_t c_index(const Exponent& p, int q, int d) {
  return max_integer_at_most(index_threshold(p, q, d));
}

std::int64_t dbar_weight(const Exponent& p, const Rational& s) {
  const Rational x = Rational(2) + s - Rational(2) * p.reciprocal();
  return p.is_one() ? max_integer_at_most(x) : max_integer_below(x);
}

Rational pullback_exponent(const Exponent& p, int q, int d) {
  check_degree(q, d);
  return Rational(q - 1) - Rational(2 * d - 2) * p.reciprocal();
}

Rational w_exponent(const Exponent& P) {
  if (P.is_infinite() || P.value() >= 2) return Rational(0);
  return Rational(2) / P.value() - 1;
}

Exponent holder_conjugate(const Exponent& P) {
  if (P.is_infinite()) return Exponent::finite(1);
  if (P.is_one()) return Exponent::infinity();
  return Exponent::finite(P.value() / (P.value() - 1));
}

NuInterval nu_interval(const Exponent& p, int q, int d) {
  const Rational x = index_threshold(p, q, d);
  if (is_integer(x)) return {Rational(1), false};
  // p = 1 always gives an integer threshold, so only the strict branch of
  // dbar_weight reaches here and the right endpoint is admissible.
  return {Rational(ceil(x)) - x, true};
}

std::vector<Rational> breakpoints(int q, int d) {
  check_degree(q, d);
  // 1 + q - 2d/p = k  <=>  p = 2d/m with m = 1 + q - k in [1, 2d].
  std::vector<Rational> out;
  for (int m = 2 * d; m >= 1; --m) out.emplace_back(2 * d, m);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexBundle make_index_bundle(const Exponent& p, int q, int d) {
  IndexBundle b;
  b.p = p;
  b.q = q;
  b.d = d;
  b.a = a_index(p, q, d);
  b.c = c_index(p, q, d);
  b.s = pullback_exponent(p, q, d);
  b.k_of_s = dbar_weight(p, b.s);
  b.w = w_exponent(p);
  b.nu = nu_interval(p, q, d);
  b.breakpoints = breakpoints(q, d);
  return b;
}

}  // namespace lpd
