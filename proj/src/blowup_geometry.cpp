#include "lpd/blowup_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <nlohmann/json.hpp>

#include "lpd/exterior.hpp"

namespace lpd {

namespace {

using C = std::complex<double>;
using CVec = std::vector<C>;
using Rng = boost::random::mt19937;

double norm(const CVec& z) {
  double s = 0;
  for (const C& c : z) s += std::norm(c);
  return std::sqrt(s);
}

double sq_norm(const CVec& w) {
  double s = 0;
  for (const C& c : w) s += std::norm(c);
  return s;
}

C uniform_disc(Rng& g) {
  boost::random::uniform_real_distribution<double> U(0, 1);
  const double r = std::sqrt(U(g));
  return std::polar(r, 2 * std::numbers::pi * U(g));
}

// Hermitian metric of N on chart tangents (w_1 .. w_{d-1}, t): Fubini-Study
// on the base, |t (1, w)|^2 along the fiber.
Eigen::MatrixXcd bundle_metric(const CVec& w) {
  const int d = static_cast<int>(w.size()) + 1;
  const double s = 1 + sq_norm(w);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j + 1 < d; ++j) {
    for (int k = 0; k + 1 < d; ++k) G(j, k) = (j == k ? 1 / s : 0.0) - std::conj(w[j]) * w[k] / (s * s);
  }
  G(d - 1, d - 1) = s;
  return G;
}

// Pointwise norm of a chart (0,q)-form in the N metric.
double bundle_norm(const CVec& w, int q, const CVec& c) {
  const int d = static_cast<int>(w.size()) + 1;
  const Eigen::MatrixXcd H = bundle_metric(w).inverse();
  const std::vector<unsigned> masks = ext::masks_of_degree(d, q);
  C acc = 0;
  for (std::size_t K = 0; K < masks.size(); ++K) {
    if (c[K] == C(0)) continue;
    for (std::size_t M = 0; M < masks.size(); ++M) {
      if (c[M] == C(0)) continue;
      acc += std::conj(c[K]) * c[M] * ext::minor<C>(H, masks[K], masks[M]);
    }
  }
  return std::sqrt(std::max(0.0, acc.real()));
}

// Test form in chart-1 coordinates (t, w): chart-frame coefficients.
CVec chart_form(double alpha, int q, int d, Direction dir, C t, const CVec& w) {
  const std::vector<unsigned> masks = ext::masks_of_degree(d, q);
  unsigned mask = 0;
  const int base_bits = dir == Direction::pullback ? q - 1 : q;
  for (int b = 0; b < base_bits; ++b) mask |= 1u << b;
  double scale = std::pow(1 + sq_norm(w), alpha / 2);
  C value;
  if (dir == Direction::pullback) {
    // alpha_1 ^ alpha_J = dtbar ^ tbar^{q-1} dwbar_J
    mask |= 1u << (d - 1);
    value = scale * std::pow(std::abs(t), alpha) * std::pow(std::conj(t), q - 1);
  } else {
    value = scale * std::pow(std::abs(t), alpha + q);
  }
  CVec c(masks.size(), 0);
  c[std::find(masks.begin(), masks.end(), mask) - masks.begin()] = value;
  return c;
}

double ambient_value(double alpha, int q, int d, Direction dir, const CVec& z) {
  const ChartFrame ch{0, d};
  CVec w;
  for (int k = 1; k < d; ++k) w.push_back(z[k] / z[0]);
  Eigen::MatrixXcd A, B;
  ch.frames(w, z[0], A, B);
  return norm(ext::substitute<C>(B, q, chart_form(alpha, q, d, dir, z[0], w)));
}

void finish(SideReport& side, double predicted, const TransferCheckOptions& opt, bool sup) {
  double log_sum = 0;
  side.scaling_ok = true;
  for (std::size_t k = 0; k + 1 < side.masses.size(); ++k) {
    const double r = side.masses[k + 1] / side.masses[k];
    side.ratios.push_back(r);
    log_sum += std::log2(r);
    if (!(std::abs(r / predicted - 1) <= opt.ratio_tolerance)) side.scaling_ok = false;
  }
  side.gap_estimate = side.ratios.empty() ? 0 : -log_sum / side.ratios.size();
  const auto [lo, hi] = std::minmax_element(side.masses.begin(), side.masses.end());
  const bool constant = *hi - *lo <= 1e-9 * *hi;
  if (side.gap_estimate >= opt.margin || (sup && constant)) {
    side.verdict = Verdict::member;
  } else if (side.gap_estimate <= -opt.margin) {
    side.verdict = Verdict::non_member;
  } else {
    side.verdict = Verdict::inconclusive;
  }
}

}  // namespace

int volume_weight(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  return 2 * d - 2;
}

double bundle_volume_density(const std::vector<std::complex<double>>& w) {
  return std::pow(1 + sq_norm(w), 1 - static_cast<int>(w.size() + 1));
}

VolumeRatioReport volume_ratio_check(int d, const std::vector<double>& t_moduli, int samples, std::uint64_t seed) {
  volume_weight(d);
  VolumeRatioReport rep;
  rep.t_moduli = t_moduli;
  rep.min_ratio = 1e300;
  rep.max_ratio = 0;
  Rng g(static_cast<std::uint32_t>(seed));
  boost::random::uniform_real_distribution<double> U(0, 1);
  const ChartFrame ch{0, d};
  const int n = 2 * d;
  // Real coordinates (Re t, Im t, Re w_1, Im w_1, ...) -> (Re z_1, Im z_1, ...).
  auto map = [&](const Eigen::VectorXd& x) {
    CVec w;
    for (int k = 1; k < d; ++k) w.emplace_back(x(2 * k), x(2 * k + 1));
    const CVec z = ch.ambient(w, C(x(0), x(1)));
    Eigen::VectorXd out(n);
    for (int k = 0; k < d; ++k) {
      out(2 * k) = z[k].real();
      out(2 * k + 1) = z[k].imag();
    }
    return out;
  };
  for (double tm : t_moduli) {
    for (int s = 0; s < samples; ++s) {
      const C t = std::polar(tm, 2 * std::numbers::pi * U(g));
      CVec w;
      Eigen::VectorXd x(n);
      x(0) = t.real();
      x(1) = t.imag();
      for (int k = 1; k < d; ++k) {
        w.push_back(uniform_disc(g));
        x(2 * k) = w.back().real();
        x(2 * k + 1) = w.back().imag();
      }
      Eigen::MatrixXd J(n, n);
      const double h = 1e-6;
      for (int c = 0; c < n; ++c) {
        Eigen::VectorXd xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        J.col(c) = (map(xp) - map(xm)) / (2 * h);
      }
      const double ratio = std::abs(J.determinant()) / (bundle_volume_density(w) * std::pow(tm, 2 * d - 2));
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
  }
  return rep;
}

bool ambient_membership(const Rational& alpha, const Exponent& p, int d) {
  volume_weight(d);
  if (p.is_infinite()) return alpha >= Rational(0);
  return alpha * p.value() > Rational(-2 * d);
}

bool chart_membership(const Rational& alpha, const Exponent& p, int d) {
  const Rational e = Rational(volume_weight(d)) * p.reciprocal() + alpha;
  if (p.is_infinite()) return e >= Rational(0);
  return p.value() * e > Rational(-2);  // |t|^{p e} integrable in one complex variable
}

bool lp_membership_monomial(const Rational& alpha, const Exponent& p, int d) {
  const bool a = ambient_membership(alpha, p, d), c = chart_membership(alpha, p, d);
  if (a != c) throw std::logic_error("ambient and chart membership criteria disagree");
  return a;
}

const char* to_string(Direction dir) { return dir == Direction::pullback ? "pullback" : "pushdown"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::non_member: return "non-member";
    default: return "inconclusive";
  }
}

Rational form_weight_exponent(const Exponent& p, int q, int d, Direction dir) {
  check_degree(q, d);
  const Rational base = Rational(volume_weight(d)) * p.reciprocal();
  return dir == Direction::pullback ? base - Rational(q - 1) : base - Rational(q);
}

bool TransferReport::consistent() const {
  const Verdict expected = analytic ? Verdict::member : Verdict::non_member;
  for (const SideReport* s : {&ambient, &chart}) {
    if (!s->scaling_ok) return false;
    if (s->verdict != Verdict::inconclusive && s->verdict != expected) return false;
  }
  return true;
}

TransferReport transfer_numeric_check(const Rational& alpha, const Exponent& p, int q, int d, Direction dir,
                                      const TransferCheckOptions& opt) {
  check_degree(q, d);
  if (dir == Direction::pushdown && q > d - 1) throw std::invalid_argument("pushdown data needs q <= d - 1");
  if (opt.rings < 2 || opt.samples < 1 || opt.strata < 1 || !(opt.r_max > 0)) {
    throw std::invalid_argument("transfer check: bad sampling options");
  }
  TransferReport rep;
  rep.alpha = alpha;
  rep.p = p;
  rep.q = q;
  rep.d = d;
  rep.direction = dir;
  rep.seed = opt.seed;
  rep.chart_exponent = form_weight_exponent(p, q, d, dir);
  rep.analytic = lp_membership_monomial(alpha, p, d);
  const bool sup = p.is_infinite();
  rep.predicted_gap = sup ? alpha : alpha * p.value() + Rational(2 * d);
  rep.predicted_ratio = std::exp2(-to_double(rep.predicted_gap));
  const double a = to_double(alpha), pe = sup ? 0 : p.to_double(), e = to_double(rep.chart_exponent);

  // Angular / base samples are shared by all rings; radii come from one
  // stratified stream per ring.
  Rng common(static_cast<std::uint32_t>(opt.seed));
  boost::random::normal_distribution<double> N01;
  std::vector<CVec> directions;
  long tries = 0;
  while (static_cast<int>(directions.size()) < opt.samples) {
    CVec u(d);
    for (C& c : u) c = {N01(common), N01(common)};
    ++tries;
    const double r = norm(u);
    bool in_cone = true;
    for (int k = 1; k < d; ++k) in_cone = in_cone && std::abs(u[k]) <= std::abs(u[0]);
    if (!in_cone) continue;
    for (C& c : u) c /= r;
    directions.push_back(std::move(u));
  }
  const double cone_fraction = static_cast<double>(opt.samples) / tries;
  std::vector<CVec> bases(opt.samples);
  std::vector<double> phases(opt.samples);
  boost::random::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < opt.samples; ++i) {
    for (int k = 1; k < d; ++k) bases[i].push_back(uniform_disc(common));
    phases[i] = 2 * std::numbers::pi * U(common);
  }

  const double ball = std::pow(std::numbers::pi, d) / boost::math::factorial<double>(d);
  for (int k = 0; k < opt.rings; ++k) {
    const double lo = opt.r_max * std::exp2(-k - 1), hi = opt.r_max * std::exp2(-k);
    Rng stream(static_cast<std::uint32_t>(opt.seed + 1 + k));
    double amb = 0, cha = 0;
    for (int i = 0; i < opt.samples; ++i) {
      const double u = ((i % opt.strata) + U(stream)) / opt.strata;
      // ambient: volume-uniform radius in the shell
      const double r = std::pow(std::pow(lo, 2 * d) + u * (std::pow(hi, 2 * d) - std::pow(lo, 2 * d)), 0.5 / d);
      CVec z = directions[i];
      for (C& c : z) c *= r;
      const double va = ambient_value(a, q, d, dir, z);
      // chart: area-uniform |t| in the annulus, w uniform in the polydisc
      const double tm = std::sqrt(lo * lo + u * (hi * hi - lo * lo));
      const C t = std::polar(tm, phases[i]);
      const CVec& w = bases[i];
      const double vc = std::pow(tm, e) * bundle_norm(w, q, chart_form(a, q, d, dir, t, w));
      if (sup) {
        amb = std::max(amb, va);
        cha = std::max(cha, vc);
      } else {
        amb += std::pow(va, pe);
        cha += std::pow(vc, pe) * bundle_volume_density(w);
      }
    }
    if (!sup) {
      amb *= ball * (std::pow(hi, 2 * d) - std::pow(lo, 2 * d)) * cone_fraction / opt.samples;
      cha *= std::numbers::pi * (hi * hi - lo * lo) * std::pow(std::numbers::pi, d - 1) / opt.samples;
    }
    rep.ambient.masses.push_back(amb);
    rep.chart.masses.push_back(cha);
  }
  finish(rep.ambient, rep.predicted_ratio, opt, sup);
  finish(rep.chart, rep.predicted_ratio, opt, sup);
  return rep;
}

nlohmann::json to_json(const TransferReport& r) {
  auto side = [](const SideReport& s) {
    return nlohmann::json{{"masses", s.masses},
                          {"ratios", s.ratios},
                          {"gap_estimate", s.gap_estimate},
                          {"verdict", to_string(s.verdict)},
                          {"scaling_ok", s.scaling_ok}};
  };
  return {{"alpha", to_string(r.alpha)},
          {"p", r.p.str()},
          {"q", r.q},
          {"dim", r.d},
          {"direction", to_string(r.direction)},
          {"chart_exponent", to_string(r.chart_exponent)},
          {"analytic_membership", r.analytic},
          {"predicted_gap", to_string(r.predicted_gap)},
          {"predicted_ratio", r.predicted_ratio},
          {"ambient", side(r.ambient)},
          {"chart", side(r.chart)},
          {"seed", r.seed},
          {"consistent", r.consistent()}};
}

}  // namespace lpd
