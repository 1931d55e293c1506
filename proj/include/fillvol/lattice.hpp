#pragma once

// Integer lattice tools: column Hermite normal form, integer kernels,
// solvability of A x = b over subrings of Q, and Smith invariant factors.

#include "fillvol/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fillvol::lattice {

/// a * unimodular == hermite. The first `rank` columns of `hermite` are in
/// column echelon form: column j is zero above pivot_rows[j], its pivot is
/// positive, and pivot rows strictly increase. Remaining columns are zero.
struct ColumnHermite {
  MatrixZ hermite;
  MatrixZ unimodular;
  std::vector<Index> pivot_rows;
  [[nodiscard]] Index rank() const { return static_cast<Index>(pivot_rows.size()); }
};

ColumnHermite column_hermite(const MatrixZ& a);

/// Columns form a Z-basis of {x in Z^n : a x = 0}.
MatrixZ integer_kernel_basis(const MatrixZ& a);

/// Outcome of deciding a x = b over a ring R with Z <= R <= Q.
struct RingSolve {
  enum class Status { Solvable, NotInRing, NotInSpan };
  Status status = Status::NotInSpan;
  VectorQ solution;     // Solvable: a * solution == b, entries in R
  VectorQ certificate;  // NotInRing: y with y*a in R^n and y*b not in R
};

using RingMembership = std::function<bool(const Rational&)>;

RingSolve solve_in_ring(const ColumnHermite& h, const VectorQ& b, const RingMembership& in_ring);
RingSolve solve_in_ring(const MatrixZ& a, const VectorQ& b, const RingMembership& in_ring);

/// Nonzero invariant factors d1 | d2 | ... of the Smith normal form.
std::vector<Integer> smith_invariants(MatrixZ a);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

}  // namespace fillvol::lattice
