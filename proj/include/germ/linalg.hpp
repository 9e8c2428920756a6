#pragma once

// Exact dense linear algebra on Eigen matrices over an exact field. Pivoting
// only looks for a nonzero entry; there is no rounding to guard against.

#include <Eigen/Core>
#include <optional>
#include <utility>

#include "germ/scalar.hpp"

namespace germ {

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Reduced row echelon form in place; returns the rank.
template <ExactField S>
Eigen::Index row_reduce(Matrix<S>& a) {
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < a.cols() && rank < a.rows(); ++col) {
    Eigen::Index pivot = rank;
    while (pivot < a.rows() && is_zero(a(pivot, col))) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != rank) a.row(pivot).swap(a.row(rank));
    const S inv = S(1) / a(rank, col);
    for (Eigen::Index j = col; j < a.cols(); ++j) a(rank, j) *= inv;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == rank || is_zero(a(i, col))) continue;
      const S factor = a(i, col);
      for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) -= factor * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

template <ExactField S>
Eigen::Index exact_rank(Matrix<S> a) {
  return row_reduce(a);
}

/// Inverse of a square matrix, or nullopt when singular.
template <ExactField S>
std::optional<Matrix<S>> exact_inverse(const Matrix<S>& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) return std::nullopt;
  Matrix<S> aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = Matrix<S>::Identity(n, n);
  if (row_reduce(aug) < n) return std::nullopt;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (aug(i, i) != S(1)) return std::nullopt;
  }
  return Matrix<S>(aug.rightCols(n));
}

}  // namespace germ
