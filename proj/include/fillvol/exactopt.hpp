#pragma once

// Exact linear programming over the rationals and l1 minimization on affine
// solution sets, with a best-bound branch-and-bound for integral optima.

#include "fillvol/types.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fillvol {

/// minimize objective . x  subject to  constraints * x == rhs,  x >= 0.
struct LinearProgram {
  VectorQ objective;
  MatrixQ constraints;
  VectorQ rhs;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  Rational value;   // Optimal only
  VectorQ witness;  // Optimal only
  /// Optimal: y with y.A_j <= c_j for every column and y.b == value.
  /// Infeasible: a Farkas vector, y.A_j <= 0 for every column and y.b > 0.
  /// Unbounded: empty.
  VectorQ dual;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Two-phase simplex. With `float_guided`, a double-precision pass proposes a
/// basis whose exact primal and dual are accepted only if they certify the
/// answer; otherwise, or without the guide, an exact rational tableau runs
/// (Dantzig's rule with a Bland fallback on degenerate runs). The witness and
/// dual are checked by substitution before returning.
SolveResult simplex_solve(const LinearProgram& lp, bool float_guided = true);

/// A bound x_var >= value (lower) or x_var <= value (upper).
struct VarBound {
  Index var = 0;
  bool upper = false;
  Integer value;
};

/// min ||x||_1 subject to a x == b and the given bounds, x free-signed.
/// `dual` has a.rows() entries followed by one entry per bound; for columns
/// outside the problem only the leading a.rows() entries matter.
SolveResult l1_min_bounded(const MatrixQ& a, const VectorQ& b, const std::vector<VarBound>& bounds);

/// min ||x||_1 subject to a x == b over the rationals.
SolveResult l1_min_rational(const MatrixQ& a, const VectorQ& b);

/// Solves the relaxation of a node given its accumulated bounds.
using Relaxation = std::function<SolveResult(const std::vector<VarBound>&)>;

/// Picks the variable to branch on and its fractional value, or nullopt when
/// the relaxation's witness is integral.
using BranchPick = std::function<std::optional<std::pair<Index, Rational>>(const SolveResult&)>;

struct BranchOptions {
  /// Maximum number of bounds on one branch; 0 means 10 x variable count.
  std::size_t depth_cap = 0;
  /// Defaults to the first fractional witness coordinate.
  BranchPick pick;
};

/// Best-bound branch and bound for an integral minimizer of a relaxation
/// whose objective is integral on integral points. Branches on the first
/// fractional coordinate. Throws Overflow past the depth cap.
SolveResult branch_and_bound(const Relaxation& relax, Index variables, const BranchOptions& options = {});

/// min ||x||_1 over integer x with a x == b. Lattice solvability is decided
/// first, so parity-type obstructions return Infeasible without branching;
/// the returned dual is then a certificate y with y.a integral, y.b not.
SolveResult l1_min_integral(const MatrixZ& a, const VectorZ& b, const BranchOptions& options = {});

}  // namespace fillvol
