#pragma once

// (0,q)-forms on C^d sampled on (base grid) x (fiber grid). The fiber
// variable is the last coordinate, bit d-1 of a component mask; the base
// carries z_1 .. z_{d-1}. S_r applies the fiber transform to every
// component containing the fiber differential.

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "lpd/exterior.hpp"
#include "lpd/fiber_transform.hpp"

namespace lpd {

/// Nodes -extent + i*h, i = 0..n-1, on every real axis of C^dims.
template <class Real = double>
struct BaseGrid {
  int dims = 1;
  int n = 5;
  Real extent = 1;

  Real h() const { return 2 * extent / (n - 1); }
  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < 2 * dims; ++a) s *= n;
    return s;
  }
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = 0; a < axis; ++a) s *= n;
    return s;
  }
  int axis_index(std::size_t idx, int axis) const { return static_cast<int>(idx / stride(axis) % n); }
  std::vector<Complex<Real>> point(std::size_t idx) const {
    std::vector<Complex<Real>> z(dims);
    for (int k = 0; k < dims; ++k) {
      z[k] = {-extent + axis_index(idx, 2 * k) * h(), -extent + axis_index(idx, 2 * k + 1) * h()};
    }
    return z;
  }
  bool interior(std::size_t idx) const {
    for (int a = 0; a < 2 * dims; ++a) {
      const int i = axis_index(idx, a);
      if (i == 0 || i == n - 1) return false;
    }
    return true;
  }
  Real cell_volume() const { return std::pow(h(), 2 * dims); }
};

template <class Real = double>
struct SampledForm {
  int d = 2;
  int degree = 1;
  int weight = 0;  // a: S uses t^a I(t^{-a} .)
  Real support_radius = 1;
  BaseGrid<Real> base;
  FiberGrid<Real> fiber;
  /// One fiber field per base point, for every ascending mask of `degree`.
  std::map<unsigned, std::vector<Field<Real>>> components;

  unsigned fiber_bit() const { return 1u << (d - 1); }

  static SampledForm zero(int d, int q, const BaseGrid<Real>& base, const FiberGrid<Real>& fiber) {
    SampledForm f;
    f.d = d;
    f.degree = q;
    f.base = base;
    f.fiber = fiber;
    f.support_radius = fiber.extent * Real(0.9);
    for (unsigned m : ext::masks_of_degree(d, q)) {
      f.components[m].assign(base.size(), Field<Real>::Zero(fiber.n, fiber.n));
    }
    return f;
  }

  /// coeff(mask, z) with z = (z_1, ..., z_{d-1}, zeta).
  template <class F>
  static SampledForm sample(int d, int q, const BaseGrid<Real>& base, const FiberGrid<Real>& fiber,
                            Real support_radius, F&& coeff) {
    SampledForm f = zero(d, q, base, fiber);
    f.support_radius = support_radius;
    for (auto& [mask, fields] : f.components) {
      for (std::size_t b = 0; b < base.size(); ++b) {
        std::vector<Complex<Real>> z = base.point(b);
        z.push_back(0);
        for (int j = 0; j < fiber.n; ++j) {
          for (int i = 0; i < fiber.n; ++i) {
            z.back() = fiber.node(i, j);
            fields[b](i, j) = coeff(mask, z);
          }
        }
      }
    }
    f.validate();
    return f;
  }

  void validate() const {
    if (d < 2 || base.dims != d - 1) throw std::invalid_argument("sampled form: base must carry d - 1 variables");
    if (degree < 0 || degree > d) throw std::invalid_argument("sampled form: degree out of range");
    if (!(support_radius < fiber.extent)) {
      throw std::invalid_argument("sampled form: support radius must be smaller than the fiber extent");
    }
    for (const auto& [mask, fields] : components) {
      if (ext::degree(mask) != degree || mask >> d) throw std::invalid_argument("sampled form: bad component mask");
      if (fields.size() != base.size()) throw std::invalid_argument("sampled form: wrong number of base samples");
    }
  }

  /// Compact support in the fiber: the outer ring of fiber nodes is (numerically) zero.
  void check_support(Real tol = Real(1e-10)) const {
    Real peak = 0, edge = 0;
    for (const auto& [mask, fields] : components) {
      for (const Field<Real>& f : fields) {
        peak = std::max(peak, f.abs().maxCoeff());
        const int n = fiber.n;
        edge = std::max({edge, f.row(0).abs().maxCoeff(), f.row(n - 1).abs().maxCoeff(),
                         f.col(0).abs().maxCoeff(), f.col(n - 1).abs().maxCoeff()});
      }
    }
    if (edge > tol * std::max(peak, Real(1))) {
      throw std::domain_error("sampled form: support touches the fiber grid boundary");
    }
  }
};

namespace detail {

// dbar along base variable k at base point b: centered, one-sided at the edge.
template <class Real>
Field<Real> base_dbar(const SampledForm<Real>& f, const std::vector<Field<Real>>& fields, int k, std::size_t b) {
  const BaseGrid<Real>& g = f.base;
  auto partial = [&](int axis) {
    const int i = g.axis_index(b, axis);
    const std::size_t s = g.stride(axis);
    const std::size_t lo = i > 0 ? b - s : b, hi = i < g.n - 1 ? b + s : b;
    const Real step = g.h() * ((i > 0) + (i < g.n - 1));
    return Field<Real>((fields[hi] - fields[lo]) / step);
  };
  return Real(0.5) * (partial(2 * k) + Complex<Real>(0, 1) * partial(2 * k + 1));
}

}  // namespace detail

/// Finite-difference dbar; degree goes up by one.
template <class Real>
SampledForm<Real> dbar(const SampledForm<Real>& f) {
  SampledForm<Real> out = SampledForm<Real>::zero(f.d, f.degree + 1, f.base, f.fiber);
  out.weight = f.weight;
  out.support_radius = f.support_radius;
  for (auto& [mask, fields] : out.components) {
    for (int k : ext::indices(mask)) {
      const unsigned rest = mask & ~(1u << k);
      const Real sign = ext::insertion_sign(k, rest);
      const std::vector<Field<Real>>& src = f.components.at(rest);
      for (std::size_t b = 0; b < f.base.size(); ++b) {
        if (k == f.d - 1) {
          fields[b] += sign * dbar_fd(f.fiber, src[b]);
        } else {
          fields[b] += sign * detail::base_dbar(f, src, k, b);
        }
      }
    }
  }
  return out;
}

/// S_r: sum over |J| = r - 1 of t^a I(t^{-a} a_{dJ}) dzbar_J, where
/// a_{dJ} dtbar ^ dzbar_J is the fiber part of the form.
template <class Real>
SampledForm<Real> s_operator(const SampledForm<Real>& f, const FiberTransform<Real>& I) {
  if (f.degree < 1) throw std::invalid_argument("S_r needs a form of degree >= 1");
  SampledForm<Real> out = SampledForm<Real>::zero(f.d, f.degree - 1, f.base, f.fiber);
  out.weight = f.weight;
  out.support_radius = f.support_radius;
  for (auto& [mask, fields] : out.components) {
    if (mask & f.fiber_bit()) continue;  // stays zero: no fiber differential left
    const Real sign = ext::degree(mask) % 2 ? -1 : 1;
    const std::vector<Field<Real>>& src = f.components.at(mask | f.fiber_bit());
    for (std::size_t b = 0; b < f.base.size(); ++b) {
      fields[b] = sign * weighted_transform(I, src[b], f.weight);
    }
  }
  return out;
}

struct HomotopyResidual {
  double l1 = 0;         // || w - dbar S_q w - S_{q+1} dbar w ||_1
  double linf = 0;
  double closed_l1 = 0;  // || w - dbar S_q w ||_1 (small when dbar w = 0)
  double closed_linf = 0;
  double omega_l1 = 0;
  double omega_linf = 0;

  double relative_l1() const { return omega_l1 > 0 ? l1 / omega_l1 : l1; }
  double relative_closed_l1() const { return omega_l1 > 0 ? closed_l1 / omega_l1 : closed_l1; }
};

namespace detail {

// Discrete L1 / Linf over interior base points and interior fiber nodes.
template <class Real>
std::pair<double, double> norms(const SampledForm<Real>& f) {
  const int n = f.fiber.n;
  const double vol = static_cast<double>(f.base.cell_volume() * f.fiber.h() * f.fiber.h());
  double l1 = 0, linf = 0;
  for (std::size_t b = 0; b < f.base.size(); ++b) {
    if (!f.base.interior(b)) continue;
    for (const auto& [mask, fields] : f.components) {
      const auto inner = fields[b].block(1, 1, n - 2, n - 2).abs();
      l1 += static_cast<double>(inner.sum()) * vol;
      linf = std::max(linf, static_cast<double>(inner.maxCoeff()));
    }
  }
  return {l1, linf};
}

template <class Real>
SampledForm<Real> minus(SampledForm<Real> a, const SampledForm<Real>& b) {
  for (auto& [mask, fields] : a.components) {
    const auto it = b.components.find(mask);
    if (it == b.components.end()) continue;
    for (std::size_t i = 0; i < fields.size(); ++i) fields[i] -= it->second[i];
  }
  return a;
}

}  // namespace detail

template <class Real>
HomotopyResidual homotopy_residual(const SampledForm<Real>& w, const FiberTransform<Real>& I) {
  w.validate();
  w.check_support();
  HomotopyResidual r;
  std::tie(r.omega_l1, r.omega_linf) = detail::norms(w);
  if (w.degree == 0) {
    // S_1 dbar w = w for compactly supported functions.
    const SampledForm<Real> back = s_operator(dbar(w), I);
    std::tie(r.l1, r.linf) = detail::norms(detail::minus(w, back));
    return r;
  }
  const SampledForm<Real> closed = detail::minus(w, dbar(s_operator(w, I)));
  std::tie(r.closed_l1, r.closed_linf) = detail::norms(closed);
  if (w.degree == w.d) {
    r.l1 = r.closed_l1;
    r.linf = r.closed_linf;
    return r;
  }
  std::tie(r.l1, r.linf) = detail::norms(detail::minus(closed, s_operator(dbar(w), I)));
  return r;
}

}  // namespace lpd
