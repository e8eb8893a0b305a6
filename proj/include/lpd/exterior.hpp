#pragma once

// (0,q)-forms on C^d as maps from ascending index sets (bit masks over
// 0..d-1) to coefficients.

#include <bit>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace lpd::ext {

inline int degree(unsigned mask) { return std::popcount(mask); }

/// dzbar_k ^ dzbar_rest = sign * dzbar_{rest + k} (k not in rest).
inline int insertion_sign(int k, unsigned rest) {
  return std::popcount(rest & ((1u << k) - 1u)) % 2 ? -1 : 1;
}

inline std::vector<unsigned> masks_of_degree(int d, int q) {
  std::vector<unsigned> out;
  for (unsigned m = 0; m < (1u << d); ++m) {
    if (degree(m) == q) out.push_back(m);
  }
  return out;
}

inline std::vector<int> indices(unsigned mask) {
  std::vector<int> out;
  for (int k = 0; mask >> k; ++k) {
    if (mask >> k & 1u) out.push_back(k);
  }
  return out;
}

/// det A[rows, cols] for equal-size masks (1 for the empty minor).
template <class Scalar>
Scalar minor(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A, unsigned rows, unsigned cols) {
  const std::vector<int> r = indices(rows), c = indices(cols);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) sub(i, j) = A(r[i], c[j]);
  }
  return r.empty() ? Scalar(1) : sub.determinant();
}

/// Coefficients after the substitution e_k = sum_m A(k, m) f_m of 1-forms:
/// out_M = sum_K in_K det A[K, M].
template <class Scalar>
std::vector<Scalar> substitute(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A, int q,
                               const std::vector<Scalar>& in) {
  const int d = static_cast<int>(A.rows());
  if (q == 0) return in;
  if (q == 1) {
    std::vector<Scalar> out(d, Scalar(0));
    for (int m = 0; m < d; ++m) {
      for (int k = 0; k < d; ++k) out[m] += in[k] * A(k, m);
    }
    return out;
  }
  const std::vector<unsigned> masks = masks_of_degree(d, q);
  std::vector<Scalar> out(masks.size(), Scalar(0));
  for (std::size_t m = 0; m < masks.size(); ++m) {
    for (std::size_t k = 0; k < masks.size(); ++k) {
      if (in[k] != Scalar(0)) out[m] += in[k] * minor(A, masks[k], masks[m]);
    }
  }
  return out;
}

}  // namespace lpd::ext
