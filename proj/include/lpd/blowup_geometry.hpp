#pragma once

// Blow-up of C^d at 0 (exceptional set X = CP^{d-1}): chart maps, the
// |t|-weights that transport L^p membership between the punctured ball and
// the total space N of the tautological bundle, and a Monte-Carlo check of
// those weights on monomial data.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "lpd/index_core.hpp"

namespace lpd {

/// Exact complex rationals, enough for chart round trips.
struct GaussianRational {
  Rational re{0}, im{0};

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    const Rational n = b.re * b.re + b.im * b.im;
    if (n == Rational(0)) throw std::domain_error("division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  bool is_zero() const { return re == Rational(0) && im == Rational(0); }
};

inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0); }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }

/// Chart j (1-based): z_j = t, z_k = t w_k; w lists the k != j in order.
template <class T>
struct ChartPoint {
  int chart = 1;
  T t{};
  std::vector<T> w;
};

template <class T>
std::vector<T> chart_map(const ChartPoint<T>& pt) {
  const int d = static_cast<int>(pt.w.size()) + 1;
  if (pt.chart < 1 || pt.chart > d) throw std::invalid_argument("chart index out of range");
  std::vector<T> z(d);
  for (int k = 1, b = 0; k <= d; ++k) z[k - 1] = k == pt.chart ? pt.t : pt.t * pt.w[b++];
  return z;
}

/// Inverse on the dense chart {z_j != 0}; throws std::domain_error off it.
template <class T>
ChartPoint<T> chart_inverse(const std::vector<T>& z, int chart) {
  const int d = static_cast<int>(z.size());
  if (chart < 1 || chart > d) throw std::invalid_argument("chart index out of range");
  ChartPoint<T> pt;
  pt.chart = chart;
  pt.t = z[chart - 1];
  if (is_zero(pt.t)) throw std::domain_error("point lies off the chart");
  for (int k = 1; k <= d; ++k) {
    if (k != chart) pt.w.push_back(z[k - 1] / pt.t);
  }
  return pt;
}

/// Chart j (0-based) with its coframes. Chart differentials are ordered
/// (dwbar_k for k != j ascending, dtbar), so the fiber is the last index.
struct ChartFrame {
  using C = std::complex<double>;
  int j = 0;
  int d = 2;

  std::vector<C> ambient(const std::vector<C>& w, C t) const {
    std::vector<C> z(d);
    for (int k = 0, b = 0; k < d; ++k) z[k] = k == j ? t : t * w[b++];
    return z;
  }
  int base_index(int k) const { return k < j ? k : k - 1; }

  /// dzbar = A e (pull back with A), e = B dzbar (push down with B); B = A^{-1}.
  void frames(const std::vector<C>& w, C t, Eigen::MatrixXcd& A, Eigen::MatrixXcd& B) const {
    A.setZero(d, d);
    B.setZero(d, d);
    const C tb = std::conj(t);
    A(j, d - 1) = 1;
    B(d - 1, j) = 1;
    for (int k = 0; k < d; ++k) {
      if (k == j) continue;
      const int b = base_index(k);
      const C wb = std::conj(w[b]);
      A(k, b) = tb;
      A(k, d - 1) = wb;
      B(b, k) = 1.0 / tb;
      B(b, j) = -wb / tb;
    }
  }
};

/// 2d - 2: pi^* dV ~ |t|^{2d-2} dV_N.
int volume_weight(int d);

/// dV_N / dV_euclid(t, w) in a chart: induced fiber metric times
/// Fubini-Study, (1 + |w|^2)^{1-d}.
double bundle_volume_density(const std::vector<std::complex<double>>& w);

/// |det D pi| / (dV_N |t|^{2d-2}) from a finite-difference real Jacobian at
/// random chart-1 points with |t| in t_moduli and |w_k| <= 1.
struct VolumeRatioReport {
  std::vector<double> t_moduli;
  double min_ratio = 0, max_ratio = 0;
  bool within(double budget) const { return min_ratio >= 1 / budget && max_ratio <= budget; }
};
VolumeRatioReport volume_ratio_check(int d, const std::vector<double>& t_moduli, int samples, std::uint64_t seed);

/// |z|^alpha in L^p near 0 in C^d.
bool ambient_membership(const Rational& alpha, const Exponent& p, int d);
/// |t|^{(2d-2)/p} |t|^alpha in L^p near t = 0.
bool chart_membership(const Rational& alpha, const Exponent& p, int d);
/// Both criteria; throws std::logic_error if they ever disagree.
bool lp_membership_monomial(const Rational& alpha, const Exponent& p, int d);

enum class Direction { pullback, pushdown };
const char* to_string(Direction dir);

/// pullback: (2d-2)/p - (q-1); pushdown: (2d-2)/p - q.
Rational form_weight_exponent(const Exponent& p, int q, int d, Direction dir);

enum class Verdict { member, non_member, inconclusive };
const char* to_string(Verdict v);

struct TransferCheckOptions {
  int rings = 6;
  int samples = 20000;  // per ring
  int strata = 64;      // radial strata per ring
  double r_max = 0.5;
  double margin = 0.1;
  double ratio_tolerance = 0.25;
  std::uint64_t seed = 2024;
};

struct SideReport {
  std::vector<double> masses;  // ring k: r_max 2^{-k-1} <= radius < r_max 2^{-k}; sup for p = inf
  std::vector<double> ratios;  // masses[k+1] / masses[k]
  double gap_estimate = 0;     // -log2 of the mean ratio
  Verdict verdict = Verdict::inconclusive;
  bool scaling_ok = false;     // every ratio within tolerance of the prediction
};

/// Test data: pullback direction uses |z|^alpha alpha_1 ^ .. ^ alpha_q with
/// alpha_1 = dtbar, alpha_j = tbar dwbar_j pushed to the ball; pushdown uses
/// |t|^{alpha+q} dwbar_J, |J| = q <= d - 1. Both sides sample the chart-1 cone.
struct TransferReport {
  Rational alpha;
  Exponent p = Exponent::finite(2);
  int q = 1, d = 2;
  Direction direction = Direction::pullback;
  Rational chart_exponent;
  bool analytic = false;
  Rational predicted_gap;  // alpha p + 2d, or alpha for p = inf
  double predicted_ratio = 0;
  SideReport ambient, chart;
  std::uint64_t seed = 0;

  /// Numeric verdicts never contradict the analytic one and the scaling holds.
  bool consistent() const;
};

TransferReport transfer_numeric_check(const Rational& alpha, const Exponent& p, int q, int d,
                                    Direction dir = Direction::pullback, const TransferCheckOptions& opt = {});

nlohmann::json to_json(const TransferReport& r);

}  // namespace lpd
