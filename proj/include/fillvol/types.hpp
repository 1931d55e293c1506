#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fillvol {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;
using MatrixZ = Matrix<Integer>;
using VectorZ = Vector<Integer>;

/// Integer incidence matrices of cell complexes.
using IncidenceMatrix = Eigen::SparseMatrix<std::int64_t>;

/// Sparse formal sum of cells of one dimension; terms sorted by index, no zeros.
template <typename Scalar>
struct SparseChain {
  int degree = 1;
  std::vector<std::pair<Index, Scalar>> terms;

  [[nodiscard]] bool empty() const { return terms.empty(); }
  bool operator==(const SparseChain&) const = default;
};

using Chain = SparseChain<Rational>;
using IntegralChain = SparseChain<std::int64_t>;

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

template <typename Scalar>
Rational l1_norm(const SparseChain<Scalar>& c) {
  Rational total = 0;
  for (const auto& [index, coeff] : c.terms) {
    total += abs(Rational(coeff));
  }
  return total;
}

template <typename Derived>
Rational l1_norm(const Eigen::MatrixBase<Derived>& v) {
  Rational total = 0;
  for (Index i = 0; i < v.size(); ++i) {
    total += abs(Rational(v(i)));
  }
  return total;
}

template <typename Derived>
bool all_zero(const Eigen::MatrixBase<Derived>& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0) return false;
  return true;
}

/// Builds a chain from unsorted (index, coefficient) pairs, merging repeats.
template <typename Scalar>
SparseChain<Scalar> make_chain(int degree, std::vector<std::pair<Index, Scalar>> terms);

IntegralChain scale(const IntegralChain& c, std::int64_t factor);
Chain to_rational(const IntegralChain& c);

/// "p/q" text form; integers print without a denominator.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "p", "-p", "p/q"; throws ParseError.
Rational parse_rational(std::string_view text);

Integer numerator_of(const Rational& q);
Integer denominator_of(const Rational& q);
bool is_integral(const Rational& q);

}  // namespace fillvol

#include "fillvol/detail/chain_impl.hpp"
