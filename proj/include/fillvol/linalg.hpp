#pragma once

// Exact Gaussian elimination over a field scalar (Rational in practice).
// Everything here works on dense Eigen matrices and skips zero entries in the
// inner loops, which keeps the sparse incidence-style inputs cheap.

#include "fillvol/types.hpp"

#include <optional>
#include <vector>

namespace fillvol::linalg {

template <typename Scalar>
struct Echelon {
  Matrix<Scalar> reduced;        // reduced row echelon form of the input
  std::vector<Index> pivots;     // pivot column of each nonzero row
  Matrix<Scalar> transform;      // invertible E with E * input == reduced
  [[nodiscard]] Index rank() const { return static_cast<Index>(pivots.size()); }
};

template <typename Scalar>
Echelon<Scalar> echelon(Matrix<Scalar> a) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  Matrix<Scalar> e = Matrix<Scalar>::Identity(rows, rows);
  std::vector<Index> pivots;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      a.row(p).swap(a.row(r));
      e.row(p).swap(e.row(r));
    }
    const Scalar inv = Scalar(1) / a(r, c);
    for (Index j = 0; j < cols; ++j)
      if (a(r, j) != 0) a(r, j) *= inv;
    for (Index j = 0; j < rows; ++j)
      if (e(r, j) != 0) e(r, j) *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Scalar factor = a(i, c);
      for (Index j = c; j < cols; ++j)
        if (a(r, j) != 0) a(i, j) -= factor * a(r, j);
      for (Index j = 0; j < rows; ++j)
        if (e(r, j) != 0) e(i, j) -= factor * e(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots), std::move(e)};
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return echelon<Scalar>(Matrix<Scalar>(a)).rank();
}

/// Columns form a basis of {x : a x = 0}.
template <typename Scalar>
Matrix<Scalar> kernel_basis(const Matrix<Scalar>& a) {
  const auto ech = echelon<Scalar>(a);
  const Index cols = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (Index p : ech.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Index> free;
  for (Index c = 0; c < cols; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free.push_back(c);
  Matrix<Scalar> basis = Matrix<Scalar>::Zero(cols, static_cast<Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    const Index f = free[k];
    basis(f, static_cast<Index>(k)) = 1;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
      basis(ech.pivots[r], static_cast<Index>(k)) = -ech.reduced(static_cast<Index>(r), f);
    }
  }
  return basis;
}

/// Rows form a basis of {y : y a = 0}.
template <typename Scalar>
Matrix<Scalar> left_kernel_basis(const Matrix<Scalar>& a) {
  const auto ech = echelon<Scalar>(a);
  const Index r = ech.rank();
  return ech.transform.bottomRows(a.rows() - r);
}

/// Some x with a x == b, or nullopt when b is outside the column space.
template <typename Scalar>
std::optional<Vector<Scalar>> solve(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  const auto ech = echelon<Scalar>(a);
  const Vector<Scalar> eb = ech.transform * b;
  for (Index i = ech.rank(); i < eb.size(); ++i)
    if (eb(i) != 0) return std::nullopt;
  Vector<Scalar> x = Vector<Scalar>::Zero(a.cols());
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) x(ech.pivots[r]) = eb(static_cast<Index>(r));
  return x;
}

/// True when every column of `b` lies in the column space of `a`.
template <typename Scalar>
bool column_span_contains(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (b.cols() == 0) return true;
  if (a.cols() == 0) return all_zero(b);
  Matrix<Scalar> joined(a.rows(), a.cols() + b.cols());
  joined << a, b;
  return rank(a) == rank(joined);
}

template <typename Scalar>
std::optional<Matrix<Scalar>> inverse(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  auto ech = echelon<Scalar>(a);
  if (ech.rank() != a.rows()) return std::nullopt;
  return std::move(ech.transform);
}

}  // namespace fillvol::linalg
