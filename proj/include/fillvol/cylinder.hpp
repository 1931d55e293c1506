#pragma once

// Finite-rank chain complexes over Q or Z, chain maps, the mapping cylinder
// and quotient/split checks. Degrees are integers; a missing degree has rank 0
// and a missing differential or component is the zero matrix.

#include "fillvol/error.hpp"
#include "fillvol/lattice.hpp"
#include "fillvol/linalg.hpp"
#include "fillvol/types.hpp"

#include <map>

namespace fillvol {

template <typename Scalar>
struct ChainComplex {
  std::map<int, Index> ranks;
  std::map<int, Matrix<Scalar>> differentials;  // d(i): rank(i) -> rank(i - 1)

  /// Validates shapes (DimensionMismatch) and d(i - 1) d(i) = 0 (BoundaryError).
  static ChainComplex make(std::map<int, Index> ranks, std::map<int, Matrix<Scalar>> differentials);

  [[nodiscard]] Index rank(int degree) const;
  [[nodiscard]] Matrix<Scalar> d(int degree) const;
  /// Smallest and largest degree of nonzero rank; (0, -1) when all ranks vanish.
  [[nodiscard]] std::pair<int, int> support() const;
};

template <typename Scalar>
struct ChainMap {
  ChainComplex<Scalar> source;
  ChainComplex<Scalar> target;
  std::map<int, Matrix<Scalar>> components;  // f(i): source rank(i) -> target rank(i)

  [[nodiscard]] Matrix<Scalar> component(int degree) const;
};

/// True iff d'(i) f(i) = f(i - 1) d(i) in every degree; DimensionMismatch on
/// components of the wrong shape.
template <typename Scalar>
bool check_chain_map(const ChainMap<Scalar>& f);

template <typename Scalar>
struct Cylinder {
  ChainComplex<Scalar> m;
  ChainMap<Scalar> incl_c;
  ChainMap<Scalar> incl_b;
  ChainMap<Scalar> kappa;
};

/// M_i = C_i + B_i + B_{i-1} with
///   d''_i = [ d'_i   0    -f_{i-1} ]
///           [ 0      d_i   Id      ]
///           [ 0      0    -d_{i-1} ]
/// incl_C(c) = (c, 0, 0), incl_B(b) = (0, b, 0), kappa(c, b, b') = c + f(b).
/// Throws InvalidArgument unless f is a chain map; the identities d''d'' = 0,
/// kappa incl_C = id and kappa incl_B = f are checked before returning.
template <typename Scalar>
Cylinder<Scalar> mapping_cylinder(const ChainMap<Scalar>& f);

/// Rational Betti numbers: rank C_i - rank d_i - rank d_{i+1}.
template <typename Scalar>
std::map<int, Index> homology_ranks(const ChainComplex<Scalar>& c);

template <typename Scalar>
struct QuotientSplit {
  ChainComplex<Scalar> quotient;
  bool splits = false;
};

/// Quotient of M by the image of incl (over Z, by the saturation of the image,
/// so the quotient is the free part). splits: a degree-wise left inverse of
/// incl exists; over Z this means every Smith invariant of incl_i is 1.
/// Throws NotInjective when some incl_i has a kernel.
template <typename Scalar>
QuotientSplit<Scalar> quotient_split_check(const ChainComplex<Scalar>& m, const ChainMap<Scalar>& incl);

#define FILLVOL_CYLINDER_EXTERN(S)                                                                      \
  extern template struct ChainComplex<S>;                                                               \
  extern template struct ChainMap<S>;                                                                   \
  extern template bool check_chain_map<S>(const ChainMap<S>&);                                          \
  extern template Cylinder<S> mapping_cylinder<S>(const ChainMap<S>&);                                  \
  extern template std::map<int, Index> homology_ranks<S>(const ChainComplex<S>&);                       \
  extern template QuotientSplit<S> quotient_split_check<S>(const ChainComplex<S>&, const ChainMap<S>&);
FILLVOL_CYLINDER_EXTERN(Rational)
FILLVOL_CYLINDER_EXTERN(Integer)
#undef FILLVOL_CYLINDER_EXTERN

}  // namespace fillvol
