#include "lpd/compact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <nlohmann/json.hpp>

#include "lpd/blowup_geometry.hpp"
#include "lpd/exterior.hpp"

namespace lpd {

namespace {

using C = std::complex<double>;
using F = Field<double>;

constexpr double kChiIn = 0.5, kChiOut = 0.9;

double norm(const CVec& z) {
  double s = 0;
  for (const C& c : z) s += std::norm(c);
  return std::sqrt(s);
}

// dbar u for u = chi(r) zbar_1 / r^m, m in {0, 1}.
CVec dbar_radial(const CVec& z, int m) {
  const int d = static_cast<int>(z.size());
  CVec out(d, 0);
  const double r = norm(z);
  if (r >= kChiOut || r == 0) return out;
  const double chi = smooth_cutoff(r, kChiIn, kChiOut), dchi = smooth_cutoff_derivative(r, kChiIn, kChiOut);
  const C zb1 = std::conj(z[0]);
  const double rm = m ? r : 1;
  for (int k = 0; k < d; ++k) {
    // d|z| / dzbar_k = z_k / (2r)
    C v = dchi * z[k] / (2 * r) * zb1 / rm;
    if (k == 0) v += chi / rm;
    if (m) v -= chi * zb1 * z[k] / (2 * r * r * r);
    out[k] = v;
  }
  return out;
}

C radial(const CVec& z, int m) {
  const double r = norm(z);
  if (r >= kChiOut || r == 0) return 0;
  return smooth_cutoff(r, kChiIn, kChiOut) * std::conj(z[0]) / (m ? r : 1.0);
}

void check_dim(int d, int min = 2) {
  if (d < min || d > 5) throw std::invalid_argument("form family: dimension out of range");
}

struct WSample {
  CVec w;
  double area;
};

// Product of midpoint polar rules on the unit disc, one per base variable.
std::vector<WSample> base_samples(int dims, int rings, int angles) {
  std::vector<WSample> out{{CVec{}, 1.0}};
  for (int v = 0; v < dims; ++v) {
    std::vector<WSample> next;
    for (const WSample& s : out) {
      for (int k = 0; k < rings; ++k) {
        const double r = (k + 0.5) / rings;
        const double area = std::numbers::pi * (2 * k + 1) / (rings * rings) / angles;
        for (int m = 0; m < angles; ++m) {
          const double th = 2 * std::numbers::pi * (m + 0.5) / angles;
          WSample n = s;
          n.w.push_back(std::polar(r, th));
          n.area *= area;
          next.push_back(std::move(n));
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

// Pulled-back coefficients of omega at one chart point, chart-mask order.
CVec pullback_at(const FormFamily& f, const ChartFrame& ch, const CVec& w, C t) {
  const CVec z = ch.ambient(w, t);
  if (norm(z) >= f.support) return CVec(ext::masks_of_degree(f.d, f.q).size(), 0);
  Eigen::MatrixXcd A, B;
  ch.frames(w, t, A, B);
  return ext::substitute<C>(A, f.q, f.omega(z));
}

// Pulled-back coefficients of omega on the fiber grid, chart-mask order.
std::vector<F> pullback(const FormFamily& f, const ChartFrame& ch, const CVec& w, const FiberGrid<double>& g) {
  const std::size_t nq = ext::masks_of_degree(f.d, f.q).size();
  std::vector<F> out(nq, F::Zero(g.n, g.n));
  Eigen::MatrixXcd A, B;
  for (int jj = 0; jj < g.n; ++jj) {
    for (int i = 0; i < g.n; ++i) {
      const C t = g.node(i, jj);
      const CVec z = ch.ambient(w, t);
      if (norm(z) >= f.support) continue;
      ch.frames(w, t, A, B);
      const CVec c = ext::substitute<C>(A, f.q, f.omega(z));
      for (std::size_t m = 0; m < nq; ++m) out[m](i, jj) = c[m];
    }
  }
  return out;
}

std::vector<CVec> probe_points(int d, double R, const std::vector<double>& radii, int per_radius) {
  boost::random::mt19937 gen(20240611u);
  boost::random::uniform_real_distribution<double> U(-1, 1);
  std::vector<CVec> out;
  for (double r : radii) {
    for (int k = 0; k < per_radius; ++k) {
      CVec z(d);
      double s = 0;
      do {
        for (C& c : z) c = {U(gen), U(gen)};
        s = norm(z);
      } while (s < 0.1 || s > 1);
      for (C& c : z) c *= r * R / s;
      out.push_back(std::move(z));
    }
  }
  return out;
}

}  // namespace

FormFamily radial_phase_family(int d) {
  check_dim(d);
  FormFamily f;
  f.name = "radial-phase";
  f.d = d;
  f.omega = [](const CVec& z) { return dbar_radial(z, 1); };
  f.primitive = [](const CVec& z) { return CVec{radial(z, 1)}; };
  return f;
}

FormFamily smooth_family(int d) {
  check_dim(d);
  FormFamily f;
  f.name = "smooth";
  f.d = d;
  f.omega = [](const CVec& z) { return dbar_radial(z, 0); };
  f.primitive = [](const CVec& z) { return CVec{radial(z, 0)}; };
  return f;
}

FormFamily radial_phase_q2_family(int d) {
  check_dim(d, 3);
  FormFamily f;
  f.name = "radial-phase-q2";
  f.d = d;
  f.q = 2;
  // dbar(u dzbar_2) = sum_k d_kbar u dzbar_k ^ dzbar_2
  const std::vector<unsigned> masks = ext::masks_of_degree(d, 2);
  f.omega = [masks, d](const CVec& z) {
    const CVec du = dbar_radial(z, 1);
    CVec out(masks.size(), 0);
    for (int k = 0; k < d; ++k) {
      if (k == 1) continue;
      const unsigned m = (1u << k) | 2u;
      const auto it = std::find(masks.begin(), masks.end(), m);
      out[it - masks.begin()] = (k == 0 ? 1.0 : -1.0) * du[k];
    }
    return out;
  };
  return f;
}

FormFamily zero_family(int d, int q) {
  check_dim(d);
  check_degree(q, d);
  FormFamily f;
  f.name = "zero";
  f.d = d;
  f.q = q;
  const std::size_t nq = ext::masks_of_degree(d, q).size();
  f.omega = [nq](const CVec&) { return CVec(nq, 0); };
  if (q == 1) f.primitive = [](const CVec&) { return CVec{0}; };
  return f;
}

std::vector<std::string> family_names() { return {"radial-phase", "smooth", "radial-phase-q2", "zero"}; }

FormFamily family_by_name(const std::string& name, int d) {
  if (name == "radial-phase") return radial_phase_family(d);
  if (name == "smooth") return smooth_family(d);
  if (name == "radial-phase-q2") return radial_phase_q2_family(d);
  if (name == "zero") return zero_family(d, 1);
  throw std::invalid_argument("unknown form family '" + name + "'");
}

double closure_defect(const FormFamily& f, double R) {
  const int d = f.d;
  const std::vector<unsigned> qm = ext::masks_of_degree(d, f.q), qm1 = ext::masks_of_degree(d, f.q + 1);
  std::vector<double> radii;
  for (int k = 1; k < 20; ++k) radii.push_back(k / 20.0);
  double worst = 0, scale = 0;
  for (const CVec& z : probe_points(d, R, radii, 8)) {
    const double step = 1e-4 * norm(z);
    // D[k][K] = d omega_K / d zbar_k
    std::vector<CVec> D(d);
    for (int k = 0; k < d; ++k) {
      CVec zp = z, zm = z, zip = z, zim = z;
      zp[k] += step;
      zm[k] -= step;
      zip[k] += C(0, step);
      zim[k] -= C(0, step);
      const CVec a = f.omega(zp), b = f.omega(zm), c = f.omega(zip), e = f.omega(zim);
      D[k].resize(qm.size());
      for (std::size_t K = 0; K < qm.size(); ++K) {
        D[k][K] = ((a[K] - b[K]) + C(0, 1) * (c[K] - e[K])) / (4 * step);
        scale = std::max(scale, std::abs(D[k][K]));
      }
    }
    if (f.q == d) continue;  // top degree is closed
    for (unsigned M : qm1) {
      C acc = 0;
      for (int k : ext::indices(M)) {
        const unsigned rest = M & ~(1u << k);
        const auto K = std::find(qm.begin(), qm.end(), rest) - qm.begin();
        acc += double(ext::insertion_sign(k, rest)) * D[k][K];
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return scale > 0 ? worst / scale : 0;
}

bool support_ok(const FormFamily& f, double R) {
  for (const CVec& z : probe_points(f.d, R, {0.98, 0.99, 1.0}, 16)) {
    for (const C& c : f.omega(z)) {
      if (c != C(0)) return false;
    }
  }
  return f.support < 0.98 * R;
}

bool SolverReport::passed() const {
  if (error || !closure_ok || !support_ok || annuli.empty()) return false;
  return std::all_of(annuli.begin(), annuli.end(), [&](const AnnulusReport& a) { return a.relative() <= tolerance; });
}

SolverReport solve_compact_support(const FormFamily& f, const SolverConfig& cfg) {
  const int d = f.d, q = f.q;
  check_degree(q, d);
  SolverReport rep;
  rep.family = f.name;
  rep.d = d;
  rep.q = q;
  rep.p = cfg.p;
  rep.weight = cfg.weight ? *cfg.weight : static_cast<int>(a_index(cfg.p, q, d));
  rep.n = cfg.n;
  rep.tolerance = cfg.tolerance;
  rep.grid.n = cfg.n;
  rep.grid.extent = cfg.extent;
  rep.grid.validate();
  for (auto [lo, hi] : cfg.annuli) {
    if (!(0 < lo && lo < hi)) throw std::invalid_argument("annulus radii must satisfy 0 < r_in < r_out");
    AnnulusReport row;
    row.r_in = lo;
    row.r_out = hi;
    rep.annuli.push_back(row);
  }

  rep.closure_defect = closure_defect(f, cfg.ball_radius);
  rep.closure_ok = rep.closure_defect <= cfg.closure_tolerance;
  rep.support_ok = support_ok(f, cfg.ball_radius) && f.support < cfg.extent;
  if (!rep.closure_ok) {
    rep.error = "omega is not dbar-closed (defect " + std::to_string(rep.closure_defect) + ")";
    return rep;
  }
  if (!rep.support_ok) {
    rep.error = "omega is not compactly supported inside the ball";
    return rep;
  }

  const FiberGrid<double>& g = rep.grid;
  const FiberTransform<double> I(g);
  const int a = rep.weight, n = g.n;
  const unsigned fb = 1u << (d - 1);
  const std::vector<unsigned> qm = ext::masks_of_degree(d, q), jm = ext::masks_of_degree(d, q - 1);
  const auto pos = [](const std::vector<unsigned>& v, unsigned m) { return std::find(v.begin(), v.end(), m) - v.begin(); };
  const double h2 = g.h() * g.h(), pexp = cfg.p.is_infinite() ? 0 : cfg.p.to_double();

  struct Acc {
    double omega = 0, res = 0, eta = 0, err = 0, prim = 0;
  };
  std::vector<Acc> acc(rep.annuli.size());

  try {
    for (int j = 0; j < d; ++j) {
      const ChartFrame ch{j, d};
      for (const WSample& ws : base_samples(d - 1, cfg.w_rings, cfg.w_angles)) {
        const std::vector<F> om = pullback(f, ch, ws.w, g);
        // tau_J = (-1)^|J| t^a I(t^{-a} f_{J + t}); J ranges over fiber-free masks.
        std::vector<F> tau(jm.size(), F::Zero(n, n));
        // dtau[b][J] = dbar_{w_b} tau_J, through the transform of the differenced density.
        std::vector<std::vector<F>> dtau(d - 1, tau);
        std::vector<std::vector<F>> dom(d - 1);
        const double s = cfg.w_step;
        for (int b = 0; b < d - 1; ++b) {
          auto shifted = [&](C delta) {
            CVec w = ws.w;
            w[b] += delta;
            return pullback(f, ch, w, g);
          };
          const std::vector<F> xp = shifted(s), xm = shifted(-s), yp = shifted(C(0, s)), ym = shifted(C(0, -s));
          for (std::size_t m = 0; m < qm.size(); ++m) {
            dom[b].push_back(((xp[m] - xm[m]) + C(0, 1) * (yp[m] - ym[m])) / (4 * s));
          }
        }
        for (std::size_t J = 0; J < jm.size(); ++J) {
          if (jm[J] & fb) continue;
          const double sign = ext::degree(jm[J]) % 2 ? -1 : 1;
          const auto src = pos(qm, jm[J] | fb);
          // The exact coefficient feeds the polar patch and the integrability probe at t = 0.
          auto solve = [&](const F& density, std::function<C(C)> exact) {
            if (density.abs().maxCoeff() == 0) return F(F::Zero(n, n));
            return F(sign * weighted_transform(I, density, a, std::move(exact)));
          };
          tau[J] = solve(om[src], [&](C t) { return pullback_at(f, ch, ws.w, t)[src]; });
          for (int b = 0; b < d - 1; ++b) {
            dtau[b][J] = solve(dom[b][src], [&, b](C t) {
              auto at = [&](C delta) {
                CVec w = ws.w;
                w[b] += delta;
                return pullback_at(f, ch, w, t)[src];
              };
              return ((at(s) - at(-s)) + C(0, 1) * (at(C(0, s)) - at(C(0, -s)))) / (4 * s);
            });
          }
        }
        // dbar tau - omega in chart frame.
        std::vector<F> res(qm.size());
        for (std::size_t M = 0; M < qm.size(); ++M) {
          res[M] = -om[M];
          for (int k : ext::indices(qm[M])) {
            const unsigned rest = qm[M] & ~(1u << k);
            if (rest & fb) continue;
            const auto J = pos(jm, rest);
            const double sign = ext::insertion_sign(k, rest);
            if (k == d - 1) {
              res[M] += sign * dbar_fd(g, tau[J]);
            } else {
              res[M] += sign * dtau[k][J];
            }
          }
        }

        ChartSample sample{j, ws.w, ws.area, std::vector<F>(jm.size(), F::Zero(n, n))};
        Eigen::MatrixXcd A, B;
        CVec rc(qm.size()), tc(jm.size());
        for (int jj = 0; jj < n; ++jj) {
          for (int i = 0; i < n; ++i) {
            const C t = g.node(i, jj);
            const CVec z = ch.ambient(ws.w, t);
            const double r = norm(z);
            ch.frames(ws.w, t, A, B);
            for (std::size_t J = 0; J < jm.size(); ++J) tc[J] = tau[J](i, jj);
            const CVec eta = ext::substitute<C>(B, q - 1, tc);
            if (cfg.keep_samples) {
              for (std::size_t J = 0; J < jm.size(); ++J) sample.eta[J](i, jj) = eta[J];
            }
            for (std::size_t k = 0; k < rep.annuli.size(); ++k) {
              if (r < rep.annuli[k].r_in || r >= rep.annuli[k].r_out) continue;
              for (std::size_t M = 0; M < qm.size(); ++M) rc[M] = res[M](i, jj);
              const double vol = std::pow(std::abs(t), 2 * d - 2) * h2 * ws.area;
              const double eta_abs = norm(eta);
              acc[k].omega += norm(f.omega(z)) * vol;
              acc[k].res += norm(ext::substitute<C>(B, q, rc)) * vol;
              if (cfg.p.is_infinite()) {
                acc[k].eta = std::max(acc[k].eta, eta_abs);
              } else {
                acc[k].eta += std::pow(eta_abs, pexp) * vol;
              }
              if (f.primitive) {
                const CVec u = f.primitive(z);
                CVec diff(u.size());
                for (std::size_t J = 0; J < u.size(); ++J) diff[J] = eta[J] - u[J];
                acc[k].err += norm(diff) * vol;
                acc[k].prim += norm(u) * vol;
              }
            }
          }
        }
        if (cfg.keep_samples) rep.samples.push_back(std::move(sample));
      }
    }
  } catch (const weight_violation& e) {
    rep.weight_violation = true;
    rep.error = std::string("weight violation: ") + e.what();
    rep.samples.clear();
    return rep;
  }

  for (std::size_t k = 0; k < acc.size(); ++k) {
    AnnulusReport& out = rep.annuli[k];
    out.omega_l1 = acc[k].omega;
    out.residual_l1 = acc[k].res;
    out.eta_lp = cfg.p.is_infinite() ? acc[k].eta : std::pow(acc[k].eta, 1 / pexp);
    if (f.primitive) out.primitive_error = acc[k].prim > 0 ? acc[k].err / acc[k].prim : acc[k].err;
  }
  return rep;
}

std::vector<double> eta_difference(const SolverReport& a, const SolverReport& b,
                                   const std::vector<std::pair<double, double>>& annuli) {
  if (a.samples.size() != b.samples.size() || a.samples.empty() || a.grid.n != b.grid.n ||
      a.grid.extent != b.grid.extent) {
    throw std::invalid_argument("eta_difference: runs need kept samples on identical grids");
  }
  const FiberGrid<double>& g = a.grid;
  std::vector<double> diff(annuli.size(), 0), base(annuli.size(), 0);
  for (std::size_t s = 0; s < a.samples.size(); ++s) {
    const ChartSample &x = a.samples[s], &y = b.samples[s];
    const ChartFrame ch{x.chart, a.d};
    for (int jj = 0; jj < g.n; ++jj) {
      for (int i = 0; i < g.n; ++i) {
        const C t = g.node(i, jj);
        const double r = norm(ch.ambient(x.w, t));
        for (std::size_t k = 0; k < annuli.size(); ++k) {
          if (r < annuli[k].first || r >= annuli[k].second) continue;
          const double vol = std::pow(std::abs(t), 2 * a.d - 2) * x.area;
          CVec ex, dx;
          for (std::size_t J = 0; J < x.eta.size(); ++J) {
            ex.push_back(x.eta[J](i, jj));
            dx.push_back(x.eta[J](i, jj) - y.eta[J](i, jj));
          }
          diff[k] += norm(dx) * vol;
          base[k] += norm(ex) * vol;
        }
      }
    }
  }
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = base[k] > 0 ? diff[k] / base[k] : diff[k];
  return diff;
}

std::pair<FormFamily, SolverConfig> load_case(const nlohmann::json& j) {
  SolverConfig cfg;
  const int d = j.value("dim", 2);
  FormFamily f = family_by_name(j.at("family").get<std::string>(), d);
  cfg.p = parse_exponent(j.value("p", std::string("2")));
  if (j.contains("weight")) cfg.weight = j.at("weight").get<int>();
  cfg.n = j.value("n", cfg.n);
  cfg.extent = j.value("extent", cfg.extent);
  cfg.w_rings = j.value("w_rings", cfg.w_rings);
  cfg.w_angles = j.value("w_angles", cfg.w_angles);
  cfg.w_step = j.value("w_step", cfg.w_step);
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.closure_tolerance = j.value("closure_tolerance", cfg.closure_tolerance);
  if (j.contains("annuli")) cfg.annuli = j.at("annuli").get<std::vector<std::pair<double, double>>>();
  if (cfg.w_rings < 1 || cfg.w_angles < 1 || !(cfg.w_step > 0)) {
    throw std::invalid_argument("case file: base sampling parameters must be positive");
  }
  return {std::move(f), cfg};
}

nlohmann::json to_json(const SolverReport& r) {
  nlohmann::json j;
  j["family"] = r.family;
  j["dim"] = r.d;
  j["q"] = r.q;
  j["p"] = r.p.str();
  j["weight"] = r.weight;
  j["n"] = r.n;
  j["closure_defect"] = r.closure_defect;
  j["closure_ok"] = r.closure_ok;
  j["support_ok"] = r.support_ok;
  j["weight_violation"] = r.weight_violation;
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  j["tolerance"] = r.tolerance;
  j["annuli"] = nlohmann::json::array();
  for (const AnnulusReport& a : r.annuli) {
    nlohmann::json row{{"r_in", a.r_in},
                       {"r_out", a.r_out},
                       {"omega_l1", a.omega_l1},
                       {"residual_l1", a.residual_l1},
                       {"relative_residual", a.relative()},
                       {"eta_lp", a.eta_lp}};
    row["primitive_error"] = a.primitive_error ? nlohmann::json(*a.primitive_error) : nlohmann::json(nullptr);
    j["annuli"].push_back(row);
  }
  j["passed"] = r.passed();
  return j;
}

std::string to_csv(const SolverReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << "r_in,r_out,omega_l1,residual_l1,relative_residual,eta_lp\n";
  for (const AnnulusReport& a : r.annuli) {
    out << a.r_in << ',' << a.r_out << ',' << a.omega_l1 << ',' << a.residual_l1 << ',' << a.relative() << ','
        << a.eta_lp << '\n';
  }
  return out.str();
}

}  // namespace lpd
