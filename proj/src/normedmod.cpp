#include "fillvol/normedmod.hpp"

#include "fillvol/error.hpp"
#include "fillvol/exactopt.hpp"
#include "fillvol/linalg.hpp"

#include <algorithm>

namespace fillvol {

namespace {

void require_length(const PresentedModule& m, const VectorQ& v) {
  if (v.size() != m.generator_count)
    throw DimensionMismatch("vector has " + std::to_string(v.size()) + " entries, module has " +
                            std::to_string(m.generator_count) + " generators");
}

bool same_module(const PresentedModule& a, const PresentedModule& b) {
  return a.generator_count == b.generator_count && a.relations.cols() == b.relations.cols() &&
         a.relations == b.relations;
}

}  // namespace

PresentedModule PresentedModule::make(Index generator_count, MatrixQ relations) {
  if (generator_count < 0) throw DimensionMismatch("negative generator count");
  if (relations.size() == 0) relations.resize(generator_count, 0);
  if (relations.rows() != generator_count)
    throw DimensionMismatch("relation matrix has " + std::to_string(relations.rows()) + " rows, expected " +
                            std::to_string(generator_count));
  return {generator_count, std::move(relations)};
}

PresentedModule PresentedModule::free(Index generator_count) {
  return make(generator_count, MatrixQ(generator_count, 0));
}

bool PresentedModule::same_class(const VectorQ& v, const VectorQ& w) const {
  require_length(*this, v);
  require_length(*this, w);
  const MatrixQ diff = v - w;
  return linalg::column_span_contains<Rational>(relations, diff);
}

ModuleMap ModuleMap::make(PresentedModule source, PresentedModule target, MatrixQ matrix) {
  if (matrix.rows() != target.generator_count || matrix.cols() != source.generator_count)
    throw DimensionMismatch("map matrix is " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                            ", expected " + std::to_string(target.generator_count) + "x" +
                            std::to_string(source.generator_count));
  const MatrixQ image = matrix * source.relations;
  if (!linalg::column_span_contains<Rational>(target.relations, image))
    throw InvalidArgument("map does not carry source relations into target relations");
  return {std::move(source), std::move(target), std::move(matrix)};
}

VectorQ ModuleMap::apply(const VectorQ& v) const {
  require_length(source, v);
  return matrix * v;
}

Rational filling_norm(const PresentedModule& m, const VectorQ& v) {
  require_length(m, v);
  // x ranges over v + span(relations) = {x : y x = y v} for y spanning the left kernel.
  const MatrixQ y = linalg::left_kernel_basis<Rational>(m.relations);
  if (y.rows() == 0) return 0;
  const SolveResult r = l1_min_rational(y, y * v);
  return r.value;
}

Rational bounded_constant(const ModuleMap& f) {
  Rational c = 0;
  for (Index j = 0; j < f.source.generator_count; ++j)
    c = std::max(c, filling_norm(f.target, f.matrix.col(j)));
  return c;
}

Rational norm_equivalence_constants(const PresentedModule& m, const PresentedModule& m_prime, const ModuleMap& iso,
                                    const ModuleMap& iso_inv) {
  if (!same_module(iso.source, m) || !same_module(iso.target, m_prime) || !same_module(iso_inv.source, m_prime) ||
      !same_module(iso_inv.target, m))
    throw DimensionMismatch("maps do not run between the given modules");
  const MatrixQ there_and_back = iso_inv.matrix * iso.matrix - MatrixQ::Identity(m.generator_count, m.generator_count);
  const MatrixQ back_and_there =
      iso.matrix * iso_inv.matrix - MatrixQ::Identity(m_prime.generator_count, m_prime.generator_count);
  if (!linalg::column_span_contains<Rational>(m.relations, there_and_back) ||
      !linalg::column_span_contains<Rational>(m_prime.relations, back_and_there))
    throw NotInverse("maps are not mutually inverse on classes");
  return std::max(bounded_constant(iso), bounded_constant(iso_inv));
}

}  // namespace fillvol
