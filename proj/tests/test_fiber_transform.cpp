#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lpd/fiber_transform.hpp"

using lpd::FiberGrid;
using lpd::FiberTransform;
using lpd::WeightedDensity;
using C = std::complex<double>;
using F = lpd::Field<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Area fraction of the cell centered at (x, y) covered by |z| < R.
double disc_coverage(double x, double y, double h, double R) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (std::hypot(ax + h / 2, ay + h / 2) <= R) return 1;
  if (std::hypot(std::max(ax - h / 2, 0.0), std::max(ay - h / 2, 0.0)) >= R) return 0;
  auto chord = [&](double xs) {
    const double s = std::sqrt(std::max(0.0, R * R - xs * xs));
    return std::max(0.0, std::min(y + h / 2, s) - std::max(y - h / 2, -s));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  return GK::integrate(chord, x - h / 2, x + h / 2, 8, 1e-12) / (h * h);
}

F disc_samples(const FiberGrid<double>& g, double R) {
  return lpd::sample(g, [&](C z) { return C(disc_coverage(z.real(), z.imag(), g.h(), R)); });
}

C disc_exact(C t, double R) { return std::abs(t) <= R ? std::conj(t) : R * R / t; }

// Brute force in polar coordinates centered at t, zeta = t + s e^{i phi}:
// dA / (t - zeta) = -e^{-i phi} ds dphi, so the transform of the disc
// indicator is -(1/pi) int e^{-i phi} L(phi) dphi with L the length of the
// ray inside the disc.
C disc_ray_oracle(C t, double R) {
  auto length = [&](double phi) {
    const double b = (std::conj(t) * std::polar(1.0, phi)).real();
    const double c = std::norm(t) - R * R;
    const double disc = b * b - c;
    if (disc <= 0) return 0.0;
    const double hi = -b + std::sqrt(disc), lo = std::max(0.0, -b - std::sqrt(disc));
    return std::max(0.0, hi - lo);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double re = GK::integrate([&](double p) { return -std::cos(p) * length(p); }, 0.0, 2 * kPi, 20, 1e-13);
  const double im = GK::integrate([&](double p) { return std::sin(p) * length(p); }, 0.0, 2 * kPi, 20, 1e-13);
  return C(re, im) / kPi;
}

std::vector<C> disc_probes(double R) {
  std::vector<C> out;
  for (int k = 0; k < 10; ++k) {
    out.push_back(std::polar(R * (0.25 + 0.06 * k), 0.7 + 2.399 * k));
    out.push_back(std::polar(R * (1.2 + 0.065 * k), 0.3 + 2.399 * k));
  }
  return out;
}

double disc_max_relative_error(int n) {
  const double R = 1;
  FiberGrid<double> g;
  g.extent = 2;
  g.n = n;
  const FiberTransform<double> I(g);
  const WeightedDensity<double> f{disc_samples(g, R)};
  double worst = 0;
  for (C t : disc_probes(R)) {
    const C exact = disc_exact(t, R);
    worst = std::max(worst, std::abs(I(f, t) - exact) / std::abs(exact));
  }
  return worst;
}

// Smooth bump supported in |z - c| < r.
C bump(C z, C c, double r) {
  const double s = std::norm(z - c) / (r * r);
  return s < 1 ? C(std::exp(-1 / (1 - s))) : C(0);
}

double interior_l1(const F& a, const FiberGrid<double>& g, double r_in = 0, double r_out = 1e300) {
  double acc = 0;
  for (int j = 1; j < g.n - 1; ++j) {
    for (int i = 1; i < g.n - 1; ++i) {
      const double r = std::abs(g.node(i, j));
      if (r >= r_in && r < r_out) acc += std::abs(a(i, j)) * g.h() * g.h();
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("fiber grid invariants") {
  FiberGrid<double> g;
  const auto r = g.ring_radii();
  REQUIRE(r.size() == static_cast<std::size_t>(g.rings + 1));
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    CHECK(r[k + 1] < r[k]);
    CHECK(r[k + 1] > 0);
  }
  g.n = 4;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.n = 64;
  g.ring_ratio = 1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("zero density gives zero") {
  FiberGrid<double> g;
  g.n = 32;
  const FiberTransform<double> I(g);
  const F zero = F::Zero(32, 32);
  CHECK(I.on_grid(zero).abs().maxCoeff() == 0);
  CHECK(std::abs(I(WeightedDensity<double>{zero}, C(0.3, 0.2))) == 0);
}

TEST_CASE("disc indicator against the closed form") {
  const double R = 1;
  // Oracle sanity: brute-force polar quadrature reproduces the closed form.
  for (C t : {C(0.4, 0.3), C(-0.1, 0.7), C(1.3, -0.6)}) {
    CHECK(std::abs(disc_ray_oracle(t, R) - disc_exact(t, R)) < 1e-7);
  }
  const double e256 = disc_max_relative_error(256);
  const double e512 = disc_max_relative_error(512);
  MESSAGE("disc max relative error n=256: " << e256 << ", n=512: " << e512);
  CHECK(e256 <= 0.02);
  CHECK(e256 / e512 >= 1.5);
}

TEST_CASE("on-grid FFT values equal the pointwise rule at nodes") {
  FiberGrid<double> g;
  g.n = 48;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, [](C z) { return bump(z, C(0.1, -0.2), 0.6) * C(1, z.real()); });
  const F all = I.on_grid(f);
  for (auto [i, j] : {std::pair{3, 4}, {20, 31}, {24, 24}, {47, 0}}) {
    const C direct = I(WeightedDensity<double>{f}, g.node(i, j));
    CHECK(std::abs(direct - all(i, j)) <= 1e-11 * (1 + std::abs(direct)));
  }
}

TEST_CASE("linearity") {
  FiberGrid<double> g;
  g.n = 40;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, [](C z) { return bump(z, 0.1, 0.5); });
  const F h = lpd::sample(g, [](C z) { return z * bump(z, C(0, 0.2), 0.6); });
  const C alpha(0.3, -1.2), beta(2.0, 0.5);
  const F lhs = I.on_grid(F(alpha * f + beta * h));
  const F rhs = alpha * I.on_grid(f) + beta * I.on_grid(h);
  CHECK((lhs - rhs).abs().maxCoeff() < 1e-12);
}

TEST_CASE("dbar inverts the transform on smooth data") {
  double prev = 1e300;
  for (int n : {64, 128, 256}) {
    FiberGrid<double> g;
    g.n = n;
    const FiberTransform<double> I(g);
    const F f = lpd::sample(g, [](C z) { return bump(z, C(0.1, 0.05), 0.7) * C(1 + z.real(), z.imag()); });
    const F residual = lpd::dbar_fd(g, I.on_grid(f)) - f;
    const double rel = interior_l1(residual, g) / interior_l1(f, g);
    MESSAGE("n=" << n << " relative residual " << rel);
    CHECK(rel * 1.5 <= prev);
    prev = rel;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("weighted transform: a = 0 and the structural identity") {
  FiberGrid<double> g;
  g.n = 64;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, [](C z) { return bump(z, C(0.05, 0.1), 0.6); });
  const F plain = I.on_grid(f);
  CHECK((lpd::weighted_transform(I, f, 0) - plain).abs().maxCoeff() == 0);
  for (int a : {-2, -1, 1}) {
    for (C t : {C(0.5, 0.1), C(-0.3, 0.6)}) {
      const C lhs = lpd::weighted_transform(I, f, a, t);
      const C rhs = lpd::ipow(t, a) * I(WeightedDensity<double>{f, -a}, t);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("a = 1 on zeta times the disc indicator gives |t|^2") {
  const double R = 1;
  FiberGrid<double> g;
  g.extent = 2;
  g.n = 256;
  const FiberTransform<double> I(g);
  const F disc = disc_samples(g, R);
  F f(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) f(i, j) = g.node(i, j) * disc(i, j);
  }
  auto exact = [R](C z) { return std::abs(z) < R ? z : C(0); };
  for (int k = 0; k < 8; ++k) {
    const C t = std::polar(R * (0.25 + 0.07 * k), 1.1 + 2.399 * k);
    const C tau = lpd::weighted_transform(I, f, 1, t, exact);
    CHECK(std::abs(tau - std::norm(t)) <= 0.02 * std::norm(t));
  }
}

TEST_CASE("a = 1 with a density singular at 0") {
  // f radial about 0: I(f / zeta)(t) = (2 / t^2) int_0^{|t|} f(r) r dr, so
  // t I(f / zeta) has a 1-D oracle. zeta^{-1} f is integrable; the polar
  // patch handles the pole.
  const double R = 0.7;
  auto profile = [R](double r) { return r < R ? std::exp(-1 / (1 - r * r / (R * R))) : 0.0; };
  auto f_exact = [&](C z) { return C(profile(std::abs(z))); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  FiberGrid<double> g;
  g.n = 128;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, f_exact);
  for (C t : {C(0.35, 0.2), C(-0.1, -0.45), C(0.05, 0.6)}) {
    const double mass = GK::integrate([&](double r) { return profile(r) * r; }, 0.0, std::min(std::abs(t), R), 15, 1e-14);
    const C oracle = 2.0 * mass / t;
    const C with_patch = lpd::weighted_transform(I, f, 1, t, std::function<C(C)>(f_exact));
    CHECK(std::abs(with_patch - oracle) <= 2e-3 * std::abs(oracle));
  }
  // dbar(t^{-1} tau) = t^{-1} f away from 0.
  const F tau = lpd::weighted_transform(I, f, 1, std::function<C(C)>(f_exact));
  F u(g.n, g.n), rhs(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      u(i, j) = tau(i, j) / g.node(i, j);
      rhs(i, j) = f(i, j) / g.node(i, j);
    }
  }
  const F residual = lpd::dbar_fd(g, u) - rhs;
  CHECK(interior_l1(residual, g, 0.2, 0.6) <= 0.01 * interior_l1(rhs, g, 0.2, 0.6));
}

TEST_CASE("non-integrable weights are reported") {
  FiberGrid<double> g;
  g.n = 64;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, [](C z) { return bump(z, 0, 0.6); });
  CHECK_NOTHROW(lpd::weighted_transform(I, f, 1));
  CHECK_THROWS_AS(lpd::weighted_transform(I, f, 2), lpd::weight_violation);
  // Vanishing to first order at 0 makes a = 2 integrable again.
  const F g1 = lpd::sample(g, [](C z) { return z * bump(z, 0, 0.6); });
  CHECK_NOTHROW(lpd::weighted_transform(I, g1, 2));
}

TEST_CASE("far-field points are flagged") {
  FiberGrid<double> g;
  g.n = 64;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, [](C z) { return bump(z, 0, 0.5); });
  const auto far = I.evaluate(WeightedDensity<double>{f}, C(3, 1));
  CHECK(far.far_field);
  const C mass = f.sum() * g.h() * g.h();
  CHECK(std::abs(far.value - mass / (kPi * C(3, 1))) < 0.01 * std::abs(far.value));
  CHECK_FALSE(I.evaluate(WeightedDensity<double>{f}, C(0.2, 0.1)).far_field);
}

TEST_CASE("trivialization covariance") {
  // w = phi t rescales the fiber coordinate; f~(zeta') = conj(phi)^{-1} f(zeta'/phi).
  const C phi = std::polar(0.8, 0.6);
  const C c(0.1, 0.05);
  auto f_exact = [c](C z) { return bump(z, c, 0.5) * C(1, z.imag()); };
  auto f_tilde = [&](C z) { return f_exact(z / phi) / std::conj(phi); };
  FiberGrid<double> g;
  g.n = 192;
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, f_exact);
  const F ft = lpd::sample(g, f_tilde);
  for (int a : {-1, 0, 1}) {
    for (C t : {C(0.3, 0.2), C(-0.25, 0.4)}) {
      const C v = lpd::weighted_transform(I, f, a, t, std::function<C(C)>(f_exact));
      const C vt = lpd::weighted_transform(I, ft, a, phi * t, std::function<C(C)>(f_tilde));
      CHECK(std::abs(v - vt) <= 2e-3 * std::abs(v));
    }
  }
}

TEST_CASE("weighted ring norms") {
  FiberGrid<double> g;
  g.n = 256;
  const std::vector<std::pair<double, double>> rings{{0.4, 0.8}, {0.2, 0.4}, {0.1, 0.2}};
  const lpd::Rational s(1, 2);
  // |t|^s f with f = 1: ring values are the L^p norm of 1 on the ring.
  const F ts = lpd::sample(g, [](C z) { return C(std::sqrt(std::abs(z))); });
  const auto unit = lpd::weighted_lp_norm(g, ts, s, lpd::Exponent::finite(2), rings);
  for (std::size_t k = 0; k < rings.size(); ++k) {
    const double area = kPi * (rings[k].second * rings[k].second - rings[k].first * rings[k].first);
    CHECK(unit[k] == doctest::Approx(std::sqrt(area)).epsilon(0.05));
  }
  const auto sup = lpd::weighted_lp_norm(g, ts, s, lpd::Exponent::infinity(), rings);
  for (double v : sup) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  // Too singular: |t|^{s-1} at exponent s grows on shrinking rings (p = 4).
  const F worse = lpd::sample(g, [](C z) { return C(std::pow(std::abs(z), -0.5)); });
  const auto grow = lpd::weighted_lp_norm(g, worse, s, lpd::Exponent::finite(4), rings);
  CHECK(grow[1] > 1.3 * grow[0]);
  CHECK(grow[2] > 1.3 * grow[1]);

  // A transform of smooth |t|^0 data measured at exponent 0 + 1/2 stays bounded.
  const FiberTransform<double> I(g);
  const F f = lpd::sample(g, [](C z) { return bump(z, C(0.02, 0.01), 0.7); });
  const auto improved = lpd::weighted_lp_norm(g, I.on_grid(f), lpd::Rational(1, 2), lpd::Exponent::finite(4), rings);
  CHECK(improved[2] <= 1.5 * improved[0]);
}
