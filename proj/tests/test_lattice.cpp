#include <doctest.h>

#include "fillvol/lattice.hpp"
#include "fillvol/linalg.hpp"

#include <random>

using namespace fillvol;

namespace {

MatrixZ random_int_matrix(std::mt19937& rng, Index rows, Index cols, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  MatrixZ m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

MatrixQ to_q(const MatrixZ& m) { return m.unaryExpr([](const Integer& z) { return Rational(z); }); }

bool is_integer_ring(const Rational& q) { return is_integral(q); }

}  // namespace

TEST_CASE("column hermite form is a unimodular reduction") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixZ a = random_int_matrix(rng, 1 + trial % 4, 1 + trial % 5, 6);
    const auto h = lattice::column_hermite(a);
    CHECK(a * h.unimodular == h.hermite);
    const auto inv = linalg::inverse<Rational>(to_q(h.unimodular));
    REQUIRE(inv.has_value());
    for (Index i = 0; i < inv->size(); ++i) CHECK(is_integral(inv->data()[i]));
    CHECK(h.rank() == linalg::rank(to_q(a)));
    for (Index j = h.rank(); j < a.cols(); ++j) CHECK(all_zero(h.hermite.col(j)));
  }
}

TEST_CASE("integer kernel of an incidence matrix") {
  // triangle graph: three vertices, three edges
  MatrixZ d1(3, 3);
  d1 << -1, 0, 1,
         1, -1, 0,
         0, 1, -1;
  const MatrixZ k = lattice::integer_kernel_basis(d1);
  REQUIRE(k.cols() == 1);
  CHECK(all_zero(d1 * k));
  CHECK(boost::multiprecision::abs(k(0, 0)) == 1);
}

TEST_CASE("solvability over Z and Z_S") {
  MatrixZ two(1, 1);
  two << 2;
  VectorQ one(1);
  one << 1;
  const auto over_z = lattice::solve_in_ring(two, one, is_integer_ring);
  CHECK(over_z.status == lattice::RingSolve::Status::NotInRing);
  // certificate: y*A integral, y*b not
  CHECK(is_integral(over_z.certificate(0) * 2));
  CHECK_FALSE(is_integral(over_z.certificate(0) * 1));

  const auto over_z2 = lattice::solve_in_ring(two, one, [](const Rational& q) {
    Integer d = denominator_of(q);
    while (d % 2 == 0) d /= 2;
    return d == 1;
  });
  REQUIRE(over_z2.status == lattice::RingSolve::Status::Solvable);
  CHECK(over_z2.solution(0) == Rational(1, 2));

  MatrixZ zero_col(1, 1);
  zero_col << 0;
  CHECK(lattice::solve_in_ring(zero_col, one, is_integer_ring).status == lattice::RingSolve::Status::NotInSpan);
}

TEST_CASE("random integer systems: solution or certificate") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index rows = 1 + trial % 3, cols = 1 + (trial / 3) % 4;
    const MatrixZ a = random_int_matrix(rng, rows, cols, 4);
    VectorQ b(rows);
    std::uniform_int_distribution<int> d(-6, 6);
    for (Index i = 0; i < rows; ++i) b(i) = d(rng);
    const auto res = lattice::solve_in_ring(a, b, is_integer_ring);
    switch (res.status) {
      case lattice::RingSolve::Status::Solvable:
        CHECK(to_q(a) * res.solution == b);
        for (Index i = 0; i < cols; ++i) CHECK(is_integral(res.solution(i)));
        break;
      case lattice::RingSolve::Status::NotInRing: {
        const VectorQ ya = to_q(a).transpose() * res.certificate;
        for (Index i = 0; i < cols; ++i) CHECK(is_integral(ya(i)));
        CHECK_FALSE(is_integral(res.certificate.dot(b)));
        break;
      }
      case lattice::RingSolve::Status::NotInSpan:
        CHECK_FALSE(linalg::solve<Rational>(to_q(a), b).has_value());
        break;
    }
  }
}

TEST_CASE("smith invariants") {
  MatrixZ a(2, 2);
  a << 2, 4, 6, 8;
  CHECK(lattice::smith_invariants(a) == std::vector<Integer>{2, 4});
  MatrixZ b(3, 2);
  b << 1, 0, 0, 1, 0, 0;
  CHECK(lattice::smith_invariants(b) == std::vector<Integer>{1, 1});
  MatrixZ c(2, 2);
  c << 2, 0, 0, 3;
  CHECK(lattice::smith_invariants(c) == std::vector<Integer>{1, 6});
}

TEST_CASE("rational kernels and solves") {
  MatrixQ a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  const auto k = linalg::kernel_basis<Rational>(a);
  CHECK(k.cols() == 2);
  CHECK(all_zero(a * k));
  const auto y = linalg::left_kernel_basis<Rational>(a);
  CHECK(y.rows() == 1);
  CHECK(all_zero(y * a));
  VectorQ b(2);
  b << 1, 3;
  CHECK_FALSE(linalg::solve<Rational>(a, b).has_value());
}
