#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "lpd/blowup_geometry.hpp"

using lpd::Direction;
using lpd::Exponent;
using lpd::GaussianRational;
using lpd::Rational;
using lpd::Verdict;

namespace {

GaussianRational G(std::int64_t a, std::int64_t b, std::int64_t c = 1) { return {Rational(a, c), Rational(b, c)}; }

std::vector<Exponent> test_exponents() {
  return {Exponent::finite(1), Exponent::finite(4, 3), Exponent::finite(2), Exponent::finite(4), Exponent::infinity()};
}

// \int_eps^1 r^{alpha p} r^{2d-1} dr by the midpoint rule in log r.
double radial_integral(double alpha, double p, int d, double eps) {
  const int n = 20000;
  const double L = -std::log(eps), h = L / n;
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::exp(-(i + 0.5) * h * (alpha * p + 2 * d)) * h;
  return s;
}

}  // namespace

TEST_CASE("chart map examples") {
  using P = lpd::ChartPoint<GaussianRational>;
  const auto origin = lpd::chart_map(P{1, G(0, 0), {G(7, -3)}});
  CHECK(origin == std::vector<GaussianRational>{G(0, 0), G(0, 0)});
  CHECK(lpd::chart_map(P{1, G(1, 0), {G(2, 0)}}) == std::vector<GaussianRational>{G(1, 0), G(2, 0)});
  CHECK(lpd::chart_map(P{2, G(1, 0), {G(2, 0)}}) == std::vector<GaussianRational>{G(2, 0), G(1, 0)});
  CHECK_THROWS_AS(lpd::chart_map(P{3, G(1, 0), {G(2, 0)}}), std::invalid_argument);
  CHECK_THROWS_AS(lpd::chart_inverse(std::vector<GaussianRational>{G(0, 0), G(1, 0)}, 1), std::domain_error);
}

TEST_CASE("chart round trip is exact on the dense chart") {
  for (int d = 2; d <= 4; ++d) {
    for (int j = 1; j <= d; ++j) {
      std::vector<GaussianRational> z;
      for (int k = 0; k < d; ++k) z.push_back(G(3 * k - 4 + j, 5 - 2 * k, 7 + k));
      const auto pt = lpd::chart_inverse(z, j);
      CHECK(pt.chart == j);
      CHECK(pt.w.size() == static_cast<std::size_t>(d - 1));
      CHECK(lpd::chart_map(pt) == z);
    }
  }
  // Transition between charts where both apply.
  const std::vector<GaussianRational> z{G(2, 1, 3), G(-1, 4, 5)};
  CHECK(lpd::chart_map(lpd::chart_inverse(lpd::chart_map(lpd::chart_inverse(z, 1)), 2)) == z);
}

TEST_CASE("volume weight") {
  CHECK(lpd::volume_weight(2) == 2);
  CHECK(lpd::volume_weight(3) == 4);
  CHECK_THROWS_AS(lpd::volume_weight(1), std::invalid_argument);
  for (int d : {2, 3}) {
    const auto r = lpd::volume_ratio_check(d, {0.1, 0.05}, 200, 11);
    MESSAGE("d=" << d << " ratio range [" << r.min_ratio << ", " << r.max_ratio << "]");
    // exact value (1 + |w|^2)^{d-1} with |w|^2 <= d - 1 on the polydisc
    CHECK(r.min_ratio >= 1 - 1e-6);
    CHECK(r.max_ratio <= std::pow(double(d), d - 1) + 1e-6);
    if (d == 2) CHECK(r.within(4));
  }
}

TEST_CASE("monomial membership examples against radial integrals") {
  struct Case {
    Rational alpha;
    bool member;
  };
  for (const Case& c : {Case{Rational(0), true}, Case{Rational(-2), false}, Case{Rational(-9, 5), true}}) {
    CHECK(lpd::lp_membership_monomial(c.alpha, Exponent::finite(2), 2) == c.member);
    const double a = lpd::to_double(c.alpha);
    const double coarse = radial_integral(a, 2, 2, 1e-12), fine = radial_integral(a, 2, 2, 1e-24);
    CHECK((fine - coarse < 1e-3 * fine) == c.member);
  }
  CHECK(lpd::lp_membership_monomial(Rational(0), Exponent::infinity(), 2));
  CHECK_FALSE(lpd::lp_membership_monomial(Rational(-1, 4), Exponent::infinity(), 3));
}

TEST_CASE("ambient and chart criteria agree on the full grid") {
  int checked = 0;
  for (int d : {2, 3}) {
    for (const Exponent& p : test_exponents()) {
      for (Rational a(-4); a <= Rational(1); a += Rational(1, 4)) {
        CHECK(lpd::ambient_membership(a, p, d) == lpd::chart_membership(a, p, d));
        CHECK_NOTHROW(lpd::lp_membership_monomial(a, p, d));
        ++checked;
      }
    }
  }
  CHECK(checked == 2 * 5 * 21);
}

TEST_CASE("form weight exponents") {
  CHECK(lpd::form_weight_exponent(Exponent::finite(2), 1, 2, Direction::pullback) == Rational(1));
  CHECK(lpd::form_weight_exponent(Exponent::finite(2), 1, 2, Direction::pushdown) == Rational(0));
  CHECK(lpd::form_weight_exponent(Exponent::infinity(), 2, 3, Direction::pullback) == Rational(-1));
  CHECK_THROWS_AS(lpd::form_weight_exponent(Exponent::finite(2), 0, 2, Direction::pullback), std::invalid_argument);
  for (int d = 2; d <= 5; ++d) {
    for (int q = 1; q <= d; ++q) {
      for (const Exponent& p : test_exponents()) {
        const Rational pull = lpd::form_weight_exponent(p, q, d, Direction::pullback);
        CHECK(pull - lpd::form_weight_exponent(p, q, d, Direction::pushdown) == Rational(1));
        CHECK(lpd::pullback_exponent(p, q, d) == -pull);
      }
    }
  }
}

TEST_CASE("Monte-Carlo ring masses: examples") {
  struct Case {
    Rational alpha;
    Exponent p;
    Verdict verdict;
  };
  for (const Case& c : {Case{Rational(0), Exponent::infinity(), Verdict::member},
                        Case{Rational(-1), Exponent::finite(2), Verdict::member},
                        Case{Rational(-3), Exponent::finite(2), Verdict::non_member}}) {
    const auto r = lpd::transfer_numeric_check(c.alpha, c.p, 1, 2);
    MESSAGE("alpha=" << lpd::to_string(c.alpha) << " p=" << c.p.str() << " gap est " << r.ambient.gap_estimate
                     << " / " << r.chart.gap_estimate);
    CHECK(r.ambient.verdict == c.verdict);
    CHECK(r.chart.verdict == c.verdict);
    CHECK(r.ambient.scaling_ok);
    CHECK(r.chart.scaling_ok);
    CHECK(r.consistent());
  }
}

TEST_CASE("Monte-Carlo ring masses: both directions, d = 2 and 3") {
  for (int d : {2, 3}) {
    for (int q = 1; q <= d; ++q) {
      for (Direction dir : {Direction::pullback, Direction::pushdown}) {
        if (dir == Direction::pushdown && q == d) continue;
        for (const Exponent& p : test_exponents()) {
          for (Rational a : {Rational(-4), Rational(-5, 2), Rational(-1, 2), Rational(1)}) {
            lpd::TransferCheckOptions opt;
            opt.samples = 2000;
            const auto r = lpd::transfer_numeric_check(a, p, q, d, dir, opt);
            INFO("d=" << d << " q=" << q << " " << lpd::to_string(dir) << " p=" << p.str()
                      << " alpha=" << lpd::to_string(a));
            CHECK(r.consistent());
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(lpd::transfer_numeric_check(Rational(0), Exponent::finite(2), 2, 2, Direction::pushdown),
                  std::invalid_argument);
}

TEST_CASE("boundary exponent is never misclassified") {
  const auto r = lpd::transfer_numeric_check(Rational(-2), Exponent::finite(2), 1, 2);
  CHECK_FALSE(r.analytic);
  CHECK(r.ambient.verdict != Verdict::member);
  CHECK(r.chart.verdict != Verdict::member);
  CHECK(r.consistent());
}

TEST_CASE("fixed seed reproduces the report") {
  const auto a = lpd::to_json(lpd::transfer_numeric_check(Rational(-1, 2), Exponent::finite(4, 3), 2, 3));
  const auto b = lpd::to_json(lpd::transfer_numeric_check(Rational(-1, 2), Exponent::finite(4, 3), 2, 3));
  CHECK(a.dump() == b.dump());
  CHECK(a["seed"] == 2024);
  CHECK(a["chart_exponent"] == "2");  // 4 / (4/3) - 1
}
