#pragma once

// Solid Cauchy transform on a square fiber grid,
//
//   I f(t) = (1/pi) \int f(zeta) / (t - zeta) dA(zeta),
//
// normalized so that dbar_t I f = f for compactly supported f. Midpoint rule
// with the kernel pole removed; a polar patch around zeta = 0 takes over when
// the density carries a negative power of zeta. Evaluation at every grid node
// goes through one zero-padded FFT convolution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/FFT>

#include "lpd/index_core.hpp"

namespace lpd {

template <class Real>
using Complex = std::complex<Real>;

/// Samples indexed (i, j) <-> node coord(i) + i*coord(j).
template <class Real>
using Field = Eigen::Array<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// zeta^{-a} f fails to be integrable at 0.
class weight_violation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// C-infinity step: 1 for r <= r_in, 0 for r >= r_out.
template <class Real>
Real smooth_cutoff(Real r, Real r_in, Real r_out) {
  if (r <= r_in) return 1;
  if (r >= r_out) return 0;
  const Real x = (r - r_in) / (r_out - r_in);
  const Real a = std::exp(-1 / (1 - x));
  const Real b = std::exp(-1 / x);
  return a / (a + b);
}

template <class Real>
Real smooth_cutoff_derivative(Real r, Real r_in, Real r_out) {
  if (r <= r_in || r >= r_out) return 0;
  const Real x = (r - r_in) / (r_out - r_in);
  const Real a = std::exp(-1 / (1 - x));
  const Real b = std::exp(-1 / x);
  const Real s = a + b;
  return -a * b * (1 / ((1 - x) * (1 - x)) + 1 / (x * x)) / (s * s) / (r_out - r_in);
}

template <class Real>
Complex<Real> ipow(Complex<Real> z, int m) {
  const Complex<Real> base = m < 0 ? Real(1) / z : z;
  Complex<Real> out(1);
  for (int k = 0; k < std::abs(m); ++k) out *= base;
  return out;
}

template <class Real = double>
struct FiberGrid {
  Real extent = 1;  // box [-extent, extent]^2
  int n = 128;      // cells per axis
  int rings = 8;    // polar patch: geometric rings r0 * ratio^k
  int angles = 32;
  Real ring_ratio = Real(0.5);
  Real polar_cells = 8;        // r0 in units of h
  Real subtraction_cells = 6;  // support of the pole-subtraction cutoff in units of h

  Real h() const { return 2 * extent / n; }
  Real coord(int i) const { return -extent + (i + Real(0.5)) * h(); }
  Complex<Real> node(int i, int j) const { return {coord(i), coord(j)}; }
  Real polar_radius() const { return polar_cells * h(); }
  Real subtraction_radius() const { return subtraction_cells * h(); }

  bool contains(Complex<Real> t) const {
    return std::abs(t.real()) <= extent && std::abs(t.imag()) <= extent;
  }

  /// r0 > r0*ratio > ... ; rings + 1 values.
  std::vector<Real> ring_radii() const {
    std::vector<Real> r{polar_radius()};
    for (int k = 0; k < rings; ++k) r.push_back(r.back() * ring_ratio);
    return r;
  }

  void validate() const {
    if (!(extent > 0)) throw std::invalid_argument("fiber grid extent must be positive");
    if (n < 8) throw std::invalid_argument("fiber grid needs n >= 8");
    if (rings < 4 || angles < 4) throw std::invalid_argument("polar patch needs >= 4 rings and angles");
    if (!(ring_ratio > 0 && ring_ratio < 1)) throw std::invalid_argument("ring ratio must lie in (0, 1)");
    if (!(polar_cells > 0) || !(subtraction_cells > 0)) {
      throw std::invalid_argument("polar and subtraction radii must be positive");
    }
    if (polar_radius() >= extent) throw std::invalid_argument("polar patch does not fit in the grid");
  }
};

template <class Real, class F>
Field<Real> sample(const FiberGrid<Real>& g, F&& f) {
  Field<Real> out(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) out(i, j) = f(g.node(i, j));
  }
  return out;
}

/// Bilinear interpolation; samples beyond the node lattice count as 0.
template <class Real>
Complex<Real> interpolate(const FiberGrid<Real>& g, const Field<Real>& f, Complex<Real> t) {
  const Real u = (t.real() + g.extent) / g.h() - Real(0.5);
  const Real v = (t.imag() + g.extent) / g.h() - Real(0.5);
  const int i0 = static_cast<int>(std::floor(u));
  const int j0 = static_cast<int>(std::floor(v));
  const Real fu = u - i0, fv = v - j0;
  Complex<Real> out(0);
  for (int di = 0; di <= 1; ++di) {
    for (int dj = 0; dj <= 1; ++dj) {
      const int i = i0 + di, j = j0 + dj;
      if (i < 0 || j < 0 || i >= g.n || j >= g.n) continue;
      out += (di ? fu : 1 - fu) * (dj ? fv : 1 - fv) * f(i, j);
    }
  }
  return out;
}

/// zeta^power * f, with f given by samples (interpolated off the nodes) or
/// by an exact callable when one is available.
template <class Real = double>
struct WeightedDensity {
  Field<Real> samples;
  int power = 0;
  std::function<Complex<Real>(Complex<Real>)> exact = {};

  Complex<Real> base_value(const FiberGrid<Real>& g, Complex<Real> z) const {
    return exact ? exact(z) : interpolate(g, samples, z);
  }
  Complex<Real> value(const FiberGrid<Real>& g, Complex<Real> z) const {
    return ipow(z, power) * base_value(g, z);
  }
};

/// Centered differences, one-sided on the outer ring of nodes.
template <class Real>
Field<Real> dbar_fd(const FiberGrid<Real>& g, const Field<Real>& f) {
  const int n = g.n;
  const Real h = g.h();
  Field<Real> out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int il = std::max(i - 1, 0), ir = std::min(i + 1, n - 1);
      const int jl = std::max(j - 1, 0), jr = std::min(j + 1, n - 1);
      const Complex<Real> dx = (f(ir, j) - f(il, j)) / (h * (ir - il));
      const Complex<Real> dy = (f(i, jr) - f(i, jl)) / (h * (jr - jl));
      out(i, j) = Real(0.5) * (dx + Complex<Real>(0, 1) * dy);
    }
  }
  return out;
}

/// Per ring {r_in <= |zeta| < r_out}: discrete || |zeta|^{-s} f ||_{L^p}.
template <class Real>
std::vector<Real> weighted_lp_norm(const FiberGrid<Real>& g, const Field<Real>& f, const Rational& s,
                                   const Exponent& p, const std::vector<std::pair<Real, Real>>& rings) {
  const Real sd = static_cast<Real>(to_double(s));
  const Real pd = static_cast<Real>(p.to_double());
  const Real area = g.h() * g.h();
  std::vector<Real> out;
  for (const auto& [r_in, r_out] : rings) {
    Real acc = 0;
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        const Real r = std::abs(g.node(i, j));
        if (r < r_in || r >= r_out) continue;
        const Real v = std::pow(r, -sd) * std::abs(f(i, j));
        acc = p.is_infinite() ? std::max(acc, v) : acc + std::pow(v, pd) * area;
      }
    }
    out.push_back(p.is_infinite() ? acc : std::pow(acc, 1 / pd));
  }
  return out;
}

template <class Real = double>
class FiberTransform {
 public:
  struct Point {
    Complex<Real> value;
    bool far_field = false;  // t outside the box: plain quadrature, no pole
  };

  explicit FiberTransform(FiberGrid<Real> grid) : grid_(std::move(grid)) { grid_.validate(); }

  const FiberGrid<Real>& grid() const { return grid_; }

  /// I(zeta^power f) at every node (K(0) = 0 at the pole; the symmetric
  /// stencil makes this the subtracted rule exactly).
  Field<Real> on_grid(const WeightedDensity<Real>& f) const {
    const int n = grid_.n, N = 2 * n;
    if (f.power < 0) check_integrable(f);
    Field<Real> padded = Field<Real>::Zero(N, N);
    padded.topLeftCorner(n, n) = node_values(f);
    fft2(padded, false, n);
    padded *= kernel_hat();
    fft2(padded, true, n);
    Field<Real> out = padded.topLeftCorner(n, n) / std::numbers::pi_v<Real>;
    if (f.power < 0) {
      const Sources src = polar_sources(f);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const Complex<Real> t = grid_.node(i, j);
          if (std::abs(t) >= grid_.polar_radius()) out(i, j) += correction(src, t) / std::numbers::pi_v<Real>;
        }
      }
    }
    return out;
  }
  Field<Real> on_grid(const Field<Real>& f) const { return on_grid(WeightedDensity<Real>{f}); }

  Point evaluate(const WeightedDensity<Real>& f, Complex<Real> t) const {
    if (f.power < 0) check_integrable(f);
    const Real h = grid_.h();
    const Real rho = grid_.subtraction_radius();
    const bool far = !grid_.contains(t);
    const Field<Real> g = node_values(f);

    Complex<Real> sum(0);
    for (int j = 0; j < grid_.n; ++j) {
      for (int i = 0; i < grid_.n; ++i) {
        const Complex<Real> d = t - grid_.node(i, j);
        if (std::abs(d) < h * Real(1e-9)) continue;
        sum += g(i, j) / d;
      }
    }
    if (!far && !(f.power < 0 && std::abs(t) < h * Real(1e-9))) {
      // Subtract f(t) psi(|zeta - t|), psi a smooth radial cutoff with psi = 1
      // at t: its exact kernel integral vanishes, and lattice points beyond
      // the box count too.
      const Complex<Real> gt = f.value(grid_, t);
      const int i_lo = static_cast<int>(std::floor((t.real() - rho + grid_.extent) / h - 1));
      const int j_lo = static_cast<int>(std::floor((t.imag() - rho + grid_.extent) / h - 1));
      const int span = static_cast<int>(std::ceil(2 * rho / h)) + 3;
      Complex<Real> ring(0);
      for (int j = j_lo; j <= j_lo + span; ++j) {
        for (int i = i_lo; i <= i_lo + span; ++i) {
          const Complex<Real> d = t - grid_.node(i, j);
          const Real r = std::abs(d);
          if (r >= rho || r < h * Real(1e-9)) continue;
          ring += smooth_cutoff(r, Real(0), rho) / d;
        }
      }
      sum -= gt * ring;
    }
    sum *= h * h;
    if (f.power < 0 && (far || std::abs(t) >= grid_.polar_radius() + rho)) {
      sum += correction(polar_sources(f), t);
    }
    return {sum / std::numbers::pi_v<Real>, far};
  }

  Complex<Real> operator()(const WeightedDensity<Real>& f, Complex<Real> t) const { return evaluate(f, t).value; }

  /// \int |zeta^power f| over each polar ring, outermost first.
  std::vector<Real> ring_masses(const WeightedDensity<Real>& f) const {
    std::vector<Real> out;
    for_each_polar_node([&](int ring, Complex<Real> z, Real w) {
      if (static_cast<int>(out.size()) <= ring) out.resize(ring + 1, 0);
      out[ring] += w * std::abs(f.value(grid_, z));
    });
    return out;
  }

  /// Integrable weights have ring masses shrinking geometrically toward 0;
  /// masses that stop shrinking signal |zeta|^{-2} or worse.
  void check_integrable(const WeightedDensity<Real>& f) const {
    const std::vector<Real> m = ring_masses(f);
    Real ratio = 0;
    const int last = static_cast<int>(m.size()) - 1;
    for (int k = last - 2; k <= last; ++k) {
      if (!std::isfinite(m[k]) || !std::isfinite(m[k - 1])) {
        throw weight_violation("weighted density is not finite near zeta = 0");
      }
      ratio += m[k - 1] > 0 ? m[k] / m[k - 1] : 0;
    }
    ratio /= 3;
    if (ratio >= Real(0.98)) {
      throw weight_violation("zeta^" + std::to_string(f.power) +
                             " f is not integrable at zeta = 0 (ring mass ratio " + std::to_string(ratio) + ")");
    }
  }

 private:
  static constexpr int kRadial = 4;
  static constexpr int kMoments = 32;

  struct Sources {
    std::vector<Complex<Real>> at;
    std::vector<Complex<Real>> charge;
    std::vector<Complex<Real>> moments;
  };

  Field<Real> node_values(const WeightedDensity<Real>& f) const {
    if (f.samples.rows() != grid_.n || f.samples.cols() != grid_.n) {
      throw std::invalid_argument("density samples do not match the fiber grid");
    }
    if (f.power == 0) return f.samples;
    Field<Real> g(grid_.n, grid_.n);
    for (int j = 0; j < grid_.n; ++j) {
      for (int i = 0; i < grid_.n; ++i) g(i, j) = ipow(grid_.node(i, j), f.power) * f.samples(i, j);
    }
    return g;
  }

  // fn(ring, node, area weight) over the polar patch: Gauss in r, midpoint in angle.
  template <class Fn>
  void for_each_polar_node(Fn&& fn) const {
    using Rule = boost::math::quadrature::gauss<Real, kRadial>;
    const std::vector<Real> radii = grid_.ring_radii();
    const Real dtheta = 2 * std::numbers::pi_v<Real> / grid_.angles;
    for (int k = 0; k + 1 < static_cast<int>(radii.size()); ++k) {
      const Real a = radii[k + 1], b = radii[k];
      const Real mid = (a + b) / 2, half = (b - a) / 2;
      for (std::size_t q = 0; q < Rule::abscissa().size(); ++q) {
        for (int sign : {-1, 1}) {
          const Real r = mid + sign * half * Rule::abscissa()[q];
          const Real w = half * Rule::weights()[q] * r * dtheta;
          for (int m = 0; m < grid_.angles; ++m) {
            fn(k, std::polar(r, (m + Real(0.5)) * dtheta), w);
          }
        }
      }
    }
  }

  // Charges that swap the midpoint rule for the polar rule on psi * density,
  // psi a smooth cutoff supported in the polar patch.
  Sources polar_sources(const WeightedDensity<Real>& f) const {
    const Real r0 = grid_.polar_radius();
    auto psi = [&](Real r) { return smooth_cutoff(r, r0 / 4, r0); };
    Sources s;
    for_each_polar_node([&](int, Complex<Real> z, Real w) {
      s.at.push_back(z);
      s.charge.push_back(w * psi(std::abs(z)) * f.value(grid_, z));
    });
    const Real h2 = grid_.h() * grid_.h();
    for (int j = 0; j < grid_.n; ++j) {
      for (int i = 0; i < grid_.n; ++i) {
        const Complex<Real> z = grid_.node(i, j);
        if (std::abs(z) >= r0) continue;
        s.at.push_back(z);
        s.charge.push_back(-h2 * psi(std::abs(z)) * ipow(z, f.power) * f.samples(i, j));
      }
    }
    s.moments.assign(kMoments, Complex<Real>(0));
    for (std::size_t k = 0; k < s.at.size(); ++k) {
      Complex<Real> zm = s.charge[k];
      for (int m = 0; m < kMoments; ++m) {
        s.moments[m] += zm;
        zm *= s.at[k];
      }
    }
    return s;
  }

  // sum_k charge_k / (t - at_k); multipole series once t is well outside the patch.
  Complex<Real> correction(const Sources& s, Complex<Real> t) const {
    if (std::abs(t) > 4 * grid_.polar_radius()) {
      const Complex<Real> u = Real(1) / t;
      Complex<Real> acc(0);
      for (int m = kMoments - 1; m >= 0; --m) acc = (acc + s.moments[m]) * u;
      return acc;
    }
    Complex<Real> acc(0);
    for (std::size_t k = 0; k < s.at.size(); ++k) acc += s.charge[k] / (t - s.at[k]);
    return acc;
  }

  const Field<Real>& kernel_hat() const {
    if (!kernel_hat_) {
      const int n = grid_.n, N = 2 * n;
      const Real h = grid_.h();
      Field<Real> k = Field<Real>::Zero(N, N);
      for (int dj = -(n - 1); dj <= n - 1; ++dj) {
        for (int di = -(n - 1); di <= n - 1; ++di) {
          if (di == 0 && dj == 0) continue;
          k((di + N) % N, (dj + N) % N) = h / Complex<Real>(di, dj);
        }
      }
      fft2(k, false, N);
      kernel_hat_ = std::move(k);
    }
    return *kernel_hat_;
  }

  // 2-D transform of an N x N array; `live` leading columns carry data
  // (forward) or are wanted (inverse).
  void fft2(Field<Real>& a, bool inverse, int live) const {
    const int N = static_cast<int>(a.rows());
    std::vector<Complex<Real>> in(N), out(N);
    auto columns = [&] {
      for (int j = 0; j < live; ++j) {
        for (int i = 0; i < N; ++i) in[i] = a(i, j);
        inverse ? fft_.inv(out, in) : fft_.fwd(out, in);
        for (int i = 0; i < N; ++i) a(i, j) = out[i];
      }
    };
    auto rows = [&] {
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) in[j] = a(i, j);
        inverse ? fft_.inv(out, in) : fft_.fwd(out, in);
        for (int j = 0; j < N; ++j) a(i, j) = out[j];
      }
    };
    if (inverse) {
      rows();
      columns();
    } else {
      columns();
      rows();
    }
  }

  FiberGrid<Real> grid_;
  mutable std::optional<Field<Real>> kernel_hat_;
  mutable Eigen::FFT<Real> fft_;  // caches plans; one transform object per thread
};

/// t^a * I(zeta^{-a} f)(t) at every node.
template <class Real>
Field<Real> weighted_transform(const FiberTransform<Real>& I, const Field<Real>& f, int a,
                               std::type_identity_t<std::function<Complex<Real>(Complex<Real>)>> exact = {}) {
  Field<Real> out = I.on_grid(WeightedDensity<Real>{f, -a, std::move(exact)});
  if (a == 0) return out;
  const FiberGrid<Real>& g = I.grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) out(i, j) *= ipow(g.node(i, j), a);
  }
  return out;
}

/// t^a * I(zeta^{-a} f)(t) at one point.
template <class Real>
Complex<Real> weighted_transform(const FiberTransform<Real>& I, const Field<Real>& f, int a, Complex<Real> t,
                                 std::type_identity_t<std::function<Complex<Real>(Complex<Real>)>> exact = {}) {
  return ipow(t, a) * I(WeightedDensity<Real>{f, -a, std::move(exact)}, t);
}

}  // namespace lpd
