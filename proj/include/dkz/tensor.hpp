#pragma once

// Dense operators on V^{(x)n}, V = C^m.
//
// Basis ordering is lexicographic: e_{a1} (x) ... (x) e_{an} sits at row
// sum_k (a_k - 1) m^{n-k} (0-based). Factor and matrix-unit indices in the
// public API are 1-based, matching the usual E_{ab} notation.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dkz/errors.hpp"

namespace dkz {

using Complex = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = MatrixX<Complex>;
using ComplexVector = VectorX<Complex>;

/// Largest total dimension m^n handled by the dense routines.
inline constexpr std::int64_t kMaxTensorDim = 4096;

/// V^{(x)n} with dim V = m.
class TensorSpace {
 public:
  TensorSpace(int m, int n) : m_(m), n_(n) {
    if (m < 2) throw ValidationError("TensorSpace: m must be >= 2, got " + std::to_string(m));
    if (n < 1) throw ValidationError("TensorSpace: n must be >= 1, got " + std::to_string(n));
    std::int64_t d = 1;
    for (int k = 0; k < n; ++k) {
      d *= m;
      if (d > kMaxTensorDim)
        throw ValidationError("TensorSpace: m^n exceeds " + std::to_string(kMaxTensorDim));
    }
    dim_ = static_cast<Eigen::Index>(d);
  }

  int m() const { return m_; }
  int n() const { return n_; }
  Eigen::Index dim() const { return dim_; }

  /// 0-based digit of basis index `row` in tensor factor `factor` (1-based).
  int digit(Eigen::Index row, int factor) const {
    Eigen::Index stride = 1;
    for (int k = factor; k < n_; ++k) stride *= m_;
    return static_cast<int>((row / stride) % m_);
  }

  /// Stride of factor `factor` (1-based) in the lexicographic ordering.
  Eigen::Index stride(int factor) const {
    Eigen::Index s = 1;
    for (int k = factor; k < n_; ++k) s *= m_;
    return s;
  }

  void check_factor(int i) const {
    if (i < 1 || i > n_)
      throw ValidationError("factor index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }

  friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

 private:
  int m_;
  int n_;
  Eigen::Index dim_;
};

/// Ordered pair of distinct tensor factors (1-based).
struct FactorPair {
  int i;
  int j;

  void check(const TensorSpace& space) const {
    space.check_factor(i);
    space.check_factor(j);
    if (i == j) throw ValidationError("FactorPair: factors must be distinct");
  }
};

/// E_{ab}: the m x m matrix with a single 1 at (a, b).
template <typename Scalar = Complex>
MatrixX<Scalar> elementary_matrix(int a, int b, int m) {
  if (m < 1 || a < 1 || a > m || b < 1 || b > m)
    throw ValidationError("elementary_matrix: index out of range");
  MatrixX<Scalar> e = MatrixX<Scalar>::Zero(m, m);
  e(a - 1, b - 1) = Scalar(1);
  return e;
}

/// Omega = sum_{a,b} E_ab (x) E_ba, which is the flip x (x) y -> y (x) x.
template <typename Scalar = Complex>
MatrixX<Scalar> casimir_omega(int m) {
  if (m < 2) throw ValidationError("casimir_omega: m must be >= 2");
  const Eigen::Index d = static_cast<Eigen::Index>(m) * m;
  MatrixX<Scalar> omega = MatrixX<Scalar>::Zero(d, d);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) omega(a * m + b, b * m + a) = Scalar(1);
  return omega;
}

/// [Omega] = sum_a E_aa (x) E_aa.
template <typename Scalar = Complex>
MatrixX<Scalar> diagonal_omega(int m) {
  if (m < 2) throw ValidationError("diagonal_omega: m must be >= 2");
  const Eigen::Index d = static_cast<Eigen::Index>(m) * m;
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(d, d);
  for (int a = 0; a < m; ++a) out(a * m + a, a * m + a) = Scalar(1);
  return out;
}

/// `op` acting on factor i of V^{(x)n}, identity on the others.
template <typename Derived>
MatrixX<typename Derived::Scalar> embed_single(const Eigen::MatrixBase<Derived>& op, int i,
                                               const TensorSpace& space) {
  using Scalar = typename Derived::Scalar;
  space.check_factor(i);
  const int m = space.m();
  if (op.rows() != m || op.cols() != m) throw DimensionError("embed_single: op must be m x m");
  const Eigen::Index d = space.dim();
  const Eigen::Index s = space.stride(i);
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int c = space.digit(col, i);
    const Eigen::Index base = col - c * s;
    for (int r = 0; r < m; ++r) {
      const Scalar v = op(r, c);
      if (v != Scalar(0)) out(base + r * s, col) = v;
    }
  }
  return out;
}

/// `op` on V (x) V acting with its first slot on factor pair.i and its
/// second slot on factor pair.j; identity elsewhere. Works for i > j.
template <typename Derived>
MatrixX<typename Derived::Scalar> embed_pair(const Eigen::MatrixBase<Derived>& op, FactorPair pair,
                                             const TensorSpace& space) {
  using Scalar = typename Derived::Scalar;
  pair.check(space);
  const int m = space.m();
  if (op.rows() != m * m || op.cols() != m * m)
    throw DimensionError("embed_pair: op must be m^2 x m^2");
  const Eigen::Index d = space.dim();
  const Eigen::Index si = space.stride(pair.i);
  const Eigen::Index sj = space.stride(pair.j);
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int ci = space.digit(col, pair.i);
    const int cj = space.digit(col, pair.j);
    const Eigen::Index base = col - ci * si - cj * sj;
    const Eigen::Index op_col = ci * m + cj;
    for (int ri = 0; ri < m; ++ri)
      for (int rj = 0; rj < m; ++rj) {
        const Scalar v = op(ri * m + rj, op_col);
        if (v != Scalar(0)) out(base + ri * si + rj * sj, col) = v;
      }
  }
  return out;
}

/// Permutation of factors i and i+1.
template <typename Scalar = Complex>
MatrixX<Scalar> permutation_T(int i, const TensorSpace& space) {
  if (i < 1 || i > space.n() - 1)
    throw ValidationError("permutation_T: index " + std::to_string(i) + " outside 1..n-1");
  const Eigen::Index d = space.dim();
  const Eigen::Index s0 = space.stride(i);
  const Eigen::Index s1 = space.stride(i + 1);
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int a = space.digit(col, i);
    const int b = space.digit(col, i + 1);
    out(col + (b - a) * s0 + (a - b) * s1, col) = Scalar(1);
  }
  return out;
}

/// sum_{i<j} op_{ij}, e.g. the total Casimir sum_{i<j} Omega_ij.
template <typename Derived>
MatrixX<typename Derived::Scalar> pair_sum(const Eigen::MatrixBase<Derived>& op, const TensorSpace& space) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(space.dim(), space.dim());
  for (int i = 1; i <= space.n(); ++i)
    for (int j = i + 1; j <= space.n(); ++j) out += embed_pair(op, {i, j}, space);
  return out;
}

/// Frobenius norm, used for every residual in the library.
template <typename Derived>
double frobenius(const Eigen::MatrixBase<Derived>& a) {
  return static_cast<double>(a.norm());
}

}  // namespace dkz
