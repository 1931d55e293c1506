#pragma once

// Filling norms on finitely presented modules over Q. A module is a based free
// module F = Q^n modulo the column span of a relation matrix; elements are
// coordinate vectors on the generators.

#include "fillvol/types.hpp"

namespace fillvol {

struct PresentedModule {
  Index generator_count = 0;
  MatrixQ relations;  // generator_count rows; columns span the kernel of F -> M

  /// Throws DimensionMismatch unless relations has generator_count rows.
  static PresentedModule make(Index generator_count, MatrixQ relations);
  static PresentedModule free(Index generator_count);

  /// True when v and w represent the same class.
  [[nodiscard]] bool same_class(const VectorQ& v, const VectorQ& w) const;
};

/// A morphism given on generators: column j is a representative of the image
/// of source generator j in the target's free cover.
struct ModuleMap {
  PresentedModule source;
  PresentedModule target;
  MatrixQ matrix;

  /// Throws DimensionMismatch on shape errors and InvalidArgument when the
  /// matrix does not carry source relations into the target relation span.
  static ModuleMap make(PresentedModule source, PresentedModule target, MatrixQ matrix);

  [[nodiscard]] VectorQ apply(const VectorQ& v) const;
};

/// min ||v + relations t||_1 over rational t.
Rational filling_norm(const PresentedModule& m, const VectorQ& v);

/// max over source generators a of filling_norm(target, f(a)); bounds
/// ||f(m)|| <= C ||m|| for every m.
Rational bounded_constant(const ModuleMap& f);

/// max of both bounded constants; throws NotInverse unless the maps are
/// mutually inverse on classes.
Rational norm_equivalence_constants(const PresentedModule& m, const PresentedModule& m_prime, const ModuleMap& iso,
                                    const ModuleMap& iso_inv);

}  // namespace fillvol
