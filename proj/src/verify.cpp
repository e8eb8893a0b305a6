#include "lpd/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "lpd/blowup_geometry.hpp"
#include "lpd/cohomology_report.hpp"
#include "lpd/compact_solver.hpp"
#include "lpd/fiber_transform.hpp"
#include "lpd/index_core.hpp"
#include "lpd/riemann_roch.hpp"
#include "lpd/sampled_form.hpp"

namespace lpd::verify {

namespace {

using C = std::complex<double>;
using F = Field<double>;

PropertyResult timed(const std::string& suite, const std::string& name,
                     const std::function<bool(std::ostringstream&)>& body) {
  PropertyResult r;
  r.suite = suite;
  r.name = name;
  std::ostringstream detail;
  detail.precision(4);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    detail << "exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.detail = detail.str();
  return r;
}

// Breakpoints of every (q, d) with d <= 5, topped up with 1 + k/7.
std::vector<Exponent> exponent_grid(int points) {
  std::set<Rational> values;
  for (int d = 2; d <= 5; ++d) {
    for (int q = 1; q <= d; ++q) {
      for (const Rational& b : breakpoints(q, d)) values.insert(b);
    }
  }
  for (int k = 0; static_cast<int>(values.size()) < points; ++k) values.insert(Rational(1) + Rational(k, 7));
  std::vector<Exponent> out;
  for (const Rational& v : values) {
    if (static_cast<int>(out.size()) == points) break;
    out.push_back(Exponent::finite(v));
  }
  out.push_back(Exponent::infinity());
  return out;
}

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

double disc_error(int n) {
  const double R = 1;
  FiberGrid<double> g;
  g.extent = 2;
  g.n = n;
  const FiberTransform<double> I(g);
  const WeightedDensity<double> f{sample(g, [&](C z) { return C(disc_coverage(z.real(), z.imag(), g.h(), R)); })};
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    for (C t : {std::polar(R * (0.25 + 0.06 * k), 0.7 + 2.399 * k), std::polar(R * (1.2 + 0.065 * k), 0.3 + 2.399 * k)}) {
      const C exact = std::abs(t) <= R ? std::conj(t) : R * R / t;
      worst = std::max(worst, std::abs(I(f, t) - exact) / std::abs(exact));
    }
  }
  return worst;
}

C bump(const std::vector<C>& z) {
  const C c(0.08, -0.05);
  const double s = (std::norm(z[1] - c) + std::norm(z[0])) / 0.49;
  return s < 1 ? C(std::exp(-1 / (1 - s))) : C(0);
}

const char* kGenus0 =
    "| p | dim H^1_(p)(D*, O) |\n| --- | --- |\n| p > 4/3 | =0 |\n| p = 4/3 | ≤1 |\n| p < 4/3 | =1 |\n";
const char* kGenus1 =
    "| p | dim H^1_(p)(D*, O) |\n| --- | --- |\n| p > 4 | =0 |\n| p = 4 | ∈{0,1} |\n| 2 < p < 4 | =1 |\n"
    "| p = 2 | ∈{1,2} |\n| 4/3 < p < 2 | =2 |\n| p = 4/3 | ∈{2,3,4} |\n| p < 4/3 | =4 |\n";

}  // namespace

PropertyResult index_identities(int grid_points) {
  return timed("indices", "index identities", [&](std::ostringstream& out) {
    const std::vector<Exponent> grid = exponent_grid(grid_points);
    long checks = 0, failures = 0;
    auto expect = [&](bool ok) {
      ++checks;
      failures += !ok;
    };
    for (int d = 2; d <= 5; ++d) {
      for (int q = 1; q <= d; ++q) {
        std::int64_t prev_a = INT64_MIN, prev_c = INT64_MIN;
        for (const Exponent& p : grid) {
          const std::int64_t a = a_index(p, q, d), c = c_index(p, q, d);
          const bool x_integral = is_integer(index_threshold(p, q, d));
          expect(a <= c && c <= a + 1);
          expect((c == a + 1) == (!p.is_one() && x_integral));
          if (q < d) expect(a_index(p, q + 1, d) == a + 1 && c_index(p, q + 1, d) == c + 1);
          expect(a >= prev_a && c >= prev_c);
          expect(dbar_weight(p, pullback_exponent(p, q, d)) == a);
          prev_a = a;
          prev_c = c;
        }
      }
    }
    out << checks << " checks over " << grid.size() << " exponents, " << failures << " failures";
    return failures == 0;
  });
}

PropertyResult riemann_roch_identities() {
  return timed("rr", "Riemann-Roch and Serre duality", [](std::ostringstream& out) {
    long checks = 0, failures = 0;
    for (int g = 0; g <= 1; ++g) {
      for (int e = 1; e <= 4; ++e) {
        const CurveData curve{g, e};
        for (int mu = -10; mu <= 10; ++mu) {
          const std::int64_t deg = curve.degree(mu);
          ++checks;
          failures += h0(curve, mu) - h1(curve, mu) != deg + 1 - g;
          // h1(L) = h0(K - L): K = O(-2) on P^1, K = O on an elliptic curve.
          const std::int64_t dual = g == 0 ? std::max<std::int64_t>(0, -2 - deg + 1) : h0(curve, -mu);
          ++checks;
          failures += h1(curve, mu) != dual;
        }
      }
    }
    out << checks << " checks, " << failures << " failures";
    return failures == 0;
  });
}

PropertyResult cp1_vanishing_crosscheck() {
  return timed("rr", "H^1(P^1, N^-mu) = 0 for mu >= -1", [](std::ostringstream& out) {
    const CpkVanishing v = cpk_vanishing_check(1, 1);
    bool ok = v.verified && v.claimed_from == -1;
    for (int mu = -1; mu <= 50; ++mu) ok = ok && h1(CurveData{0, 1}, mu) == 0;
    ok = ok && h1(CurveData{0, 1}, -2) == 1;  // and not one step earlier
    out << "claimed from mu = " << v.claimed_from << ", checked to " << v.checked_up_to;
    return ok;
  });
}

PropertyResult genus_tables() {
  return timed("rr", "genus 0 and genus 1 band tables", [](std::ostringstream& out) {
    const std::string g0 = render_markdown(band_table(CurveData{0, 1}, 2, 1), 1);
    const std::string g1 = render_markdown(band_table(CurveData{1, 1}, 2, 1), 1);
    const bool ok0 = g0 == kGenus0, ok1 = g1 == kGenus1;
    const Cp1Verdict v0 = cp1_criterion(CurveData{0, 1}), v1 = cp1_criterion(CurveData{1, 1});
    out << "genus 0 " << (ok0 ? "matches" : "differs") << ", genus 1 " << (ok1 ? "matches" : "differs")
        << ", lower bounds at p = 2: " << v0.lower << ", " << v1.lower;
    return ok0 && ok1 && v0.vanishes && !v1.vanishes && v0.lower == 0 && v1.lower == 1;
  });
}

PropertyResult disc_oracle(int n, double tolerance, double min_gain) {
  return timed("solver", "disc Cauchy transform, n = " + std::to_string(n), [&](std::ostringstream& out) {
    const double e1 = disc_error(n), e2 = disc_error(2 * n);
    out << "max relative error " << e1 << " (n = " << 2 * n << ": " << e2 << ", gain " << e1 / e2 << ")";
    return e1 <= tolerance && e1 / e2 >= min_gain;
  });
}

PropertyResult homotopy_refinement(const std::vector<int>& ns, double tolerance) {
  return timed("solver", "homotopy formula residual", [&](std::ostringstream& out) {
    double prev = 1e300;
    bool monotone = true;
    for (int n : ns) {
      BaseGrid<double> base;
      base.dims = 1;
      base.n = 5;
      base.extent = 0.5;
      FiberGrid<double> fiber;
      fiber.n = n;
      const auto w = SampledForm<double>::sample(2, 1, base, fiber, 0.8, [](unsigned mask, const std::vector<C>& z) {
        return mask == 1u ? bump(z) * (1.0 + std::conj(z[0]) * z[1]) : bump(z) * (z[1] - 0.3 * z[0]);
      });
      const FiberTransform<double> I(w.fiber);
      const double r = homotopy_residual(w, I).relative_l1();
      out << (prev < 1e300 ? ", " : "") << "n=" << n << ": " << r;
      monotone = monotone && r < prev;
      prev = r;
    }
    return monotone && prev <= tolerance;
  });
}

PropertyResult compact_solver_residual(int n, double tolerance) {
  return timed("solver", "compact-support solve in C^2, n = " + std::to_string(n), [&](std::ostringstream& out) {
    SolverConfig cfg;
    cfg.n = n;
    cfg.tolerance = tolerance;
    const SolverReport r = solve_compact_support(radial_phase_family(2), cfg);
    double worst = 0;
    for (const AnnulusReport& a : r.annuli) worst = std::max(worst, a.relative());
    out << "worst annulus residual " << worst << " (a = " << r.weight << ")";
    if (r.error) out << "; " << *r.error;
    return r.passed();
  });
}

PropertyResult weight_crosscheck(int n, double tolerance) {
  return timed("solver", "p = 2 vs p = inf on smooth data", [&](std::ostringstream& out) {
    SolverConfig c2, ci;
    c2.n = ci.n = n;
    c2.keep_samples = ci.keep_samples = true;
    ci.p = Exponent::infinity();
    const SolverReport r2 = solve_compact_support(smooth_family(2), c2);
    const SolverReport ri = solve_compact_support(smooth_family(2), ci);
    double worst = 0;
    for (double e : eta_difference(r2, ri, c2.annuli)) worst = std::max(worst, e);
    SolverConfig bad;
    bad.n = 64;
    bad.p = Exponent::infinity();
    const bool violation = solve_compact_support(radial_phase_family(2), bad).weight_violation;
    out << "eta difference " << worst << ", radial-phase at p = inf " << (violation ? "rejected" : "accepted");
    return r2.passed() && ri.passed() && worst <= tolerance && violation;
  });
}

PropertyResult classifier_grid() {
  return timed("geometry", "ambient and chart criteria agree", [](std::ostringstream& out) {
    int checked = 0;
    bool ok = true;
    for (int d : {2, 3}) {
      for (const Exponent& p : {Exponent::finite(1), Exponent::finite(4, 3), Exponent::finite(2), Exponent::finite(4),
                                Exponent::infinity()}) {
        for (Rational a(-4); a <= Rational(1); a += Rational(1, 4)) {
          ok = ok && ambient_membership(a, p, d) == chart_membership(a, p, d);
          ++checked;
        }
      }
    }
    out << checked << " (alpha, p, d) triples";
    return ok && checked == 210;
  });
}

PropertyResult exponent_identities() {
  return timed("geometry", "form weight exponents", [](std::ostringstream& out) {
    bool ok = form_weight_exponent(Exponent::finite(2), 1, 2, Direction::pullback) == Rational(1) &&
              form_weight_exponent(Exponent::finite(2), 1, 2, Direction::pushdown) == Rational(0) &&
              form_weight_exponent(Exponent::infinity(), 2, 3, Direction::pullback) == Rational(-1);
    int n = 0;
    for (int d = 2; d <= 5; ++d) {
      for (int q = 1; q <= d; ++q) {
        for (const Exponent& p : exponent_grid(40)) {
          const Rational pull = form_weight_exponent(p, q, d, Direction::pullback);
          ok = ok && pull - form_weight_exponent(p, q, d, Direction::pushdown) == Rational(1);
          ok = ok && pullback_exponent(p, q, d) == -pull;
          ++n;
        }
      }
    }
    out << n << " (p, q, d) triples";
    return ok;
  });
}

PropertyResult chart_round_trip() {
  return timed("geometry", "chart round trip (exact)", [](std::ostringstream& out) {
    bool ok = true;
    int n = 0;
    for (int d = 2; d <= 4; ++d) {
      for (int j = 1; j <= d; ++j) {
        for (int s = 0; s < 5; ++s) {
          std::vector<GaussianRational> z;
          for (int k = 0; k < d; ++k) z.push_back({Rational(3 * k - 4 + j + s, 7 + k), Rational(5 - 2 * k + s, 3 + s)});
          if (z[j - 1].is_zero()) continue;
          ok = ok && chart_map(chart_inverse(z, j)) == z;
          ++n;
        }
      }
    }
    out << n << " rational points";
    return ok;
  });
}

PropertyResult volume_ratio(std::uint64_t seed) {
  return timed("geometry", "volume comparison |t|^{2d-2}", [&](std::ostringstream& out) {
    const VolumeRatioReport r = volume_ratio_check(2, {0.1, 0.05}, 400, seed);
    out << "ratio range [" << r.min_ratio << ", " << r.max_ratio << "], budget 4";
    return r.within(4);
  });
}

PropertyResult transfer_scaling(std::uint64_t seed, int samples) {
  return timed("geometry", "Monte-Carlo ring scaling", [&](std::ostringstream& out) {
    TransferCheckOptions opt;
    opt.seed = seed;
    opt.samples = samples;
    int cases = 0, bad = 0;
    double worst = 0;
    for (int d : {2, 3}) {
      for (Direction dir : {Direction::pullback, Direction::pushdown}) {
        for (const Exponent& p : {Exponent::finite(1), Exponent::finite(4, 3), Exponent::finite(2), Exponent::finite(4),
                                  Exponent::infinity()}) {
          for (const Rational& a : {Rational(-3), Rational(-1), Rational(-1, 2), Rational(0), Rational(1)}) {
            const TransferReport r = transfer_numeric_check(a, p, 1, d, dir, opt);
            for (const SideReport* s : {&r.ambient, &r.chart}) {
              for (double q : s->ratios) worst = std::max(worst, std::abs(q / r.predicted_ratio - 1));
            }
            ++cases;
            bad += !r.consistent();
          }
        }
      }
    }
    out << cases << " cases, " << bad << " inconsistent, worst ratio deviation " << worst;
    return bad == 0;
  });
}

std::vector<std::string> suite_names() { return {"indices", "rr", "solver", "geometry", "all"}; }

std::vector<PropertyResult> run_suite(const std::string& suite, const Options& opt) {
  std::vector<PropertyResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "indices") {
    known = true;
    out.push_back(index_identities());
  }
  if (all || suite == "rr") {
    known = true;
    out.push_back(riemann_roch_identities());
    out.push_back(cp1_vanishing_crosscheck());
    out.push_back(genus_tables());
  }
  if (all || suite == "solver") {
    known = true;
    if (opt.fast) {
      out.push_back(disc_oracle(64, 0.05));
      out.push_back(homotopy_refinement({32, 64}, 0.1));
      out.push_back(compact_solver_residual(64, 0.2));
      out.push_back(weight_crosscheck(64, 0.2));
    } else {
      out.push_back(disc_oracle(256));
      out.push_back(homotopy_refinement({64, 128, 256}));
      out.push_back(compact_solver_residual(256));
      out.push_back(weight_crosscheck(128));
    }
  }
  if (all || suite == "geometry") {
    known = true;
    out.push_back(classifier_grid());
    out.push_back(exponent_identities());
    out.push_back(chart_round_trip());
    out.push_back(volume_ratio(opt.seed));
    out.push_back(transfer_scaling(opt.seed, opt.fast ? 1000 : 4000));
  }
  if (!known) throw std::invalid_argument("unknown suite '" + suite + "'");
  return out;
}

bool all_passed(const std::vector<PropertyResult>& results) {
  for (const PropertyResult& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

nlohmann::json to_json(const std::vector<PropertyResult>& results) {
  nlohmann::json j;
  j["passed"] = all_passed(results);
  j["properties"] = nlohmann::json::array();
  for (const PropertyResult& r : results) {
    j["properties"].push_back(
        {{"suite", r.suite}, {"name", r.name}, {"status", r.passed ? "pass" : "fail"}, {"detail", r.detail}});
  }
  return j;
}

}  // namespace lpd::verify
