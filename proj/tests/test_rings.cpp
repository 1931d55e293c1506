#include <doctest.h>

#include "fillvol/error.hpp"
#include "fillvol/rings.hpp"

#include <random>

using namespace fillvol;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

MatrixQ row(std::initializer_list<Rational> xs) {
  MatrixQ m(1, static_cast<Index>(xs.size()));
  Index j = 0;
  for (const auto& x : xs) m(0, j++) = x;
  return m;
}

}  // namespace

TEST_CASE("localization construction") {
  const auto empty = make_localization({});
  CHECK(empty.contains(q(5)));
  CHECK_FALSE(empty.contains(q(1, 2)));

  const auto z2 = make_localization({2});
  CHECK(z2.contains(q(3, 4)));
  CHECK_FALSE(z2.contains(q(1, 3)));

  CHECK_THROWS_AS(make_localization({4}), NotPrime);
  CHECK_THROWS_AS(make_localization({1}), NotPrime);
}

TEST_CASE("ring membership") {
  const auto z2 = make_localization({2});
  CHECK(ring_contains(z2, q(7, 8)));
  CHECK_FALSE(ring_contains(z2, q(1, 6)));
  CHECK(ring_contains(CoefficientRing::rationals(), q(-13, 97)));
  CHECK(ring_contains(CoefficientRing::integers(), q(-4)));
  CHECK_FALSE(ring_contains(CoefficientRing::integers(), q(1, 2)));
}

TEST_CASE("scaling denominator") {
  const auto z2 = make_localization({2});
  CHECK(scaling_denominator(z2, row({q(1, 2), q(3, 4)})) == 4);
  CHECK(scaling_denominator(z2, row({q(1), q(-5)})) == 1);
  CHECK_THROWS_AS(scaling_denominator(z2, row({q(1, 3)})), NotScalable);
  CHECK(scaling_denominator(CoefficientRing::rationals(), row({q(1, 6), q(1, 4)})) == 12);
}

TEST_CASE("ring spec syntax round-trips") {
  CHECK(parse_ring("z") == CoefficientRing::integers());
  CHECK(parse_ring("q") == CoefficientRing::rationals());
  CHECK(parse_ring("zs:5,2,3").spec() == "zs:2,3,5");
  CHECK_THROWS_AS(parse_ring("zs:2,9"), NotPrime);
  CHECK_THROWS_AS(parse_ring("r"), InvalidArgument);
}

TEST_CASE("S-units up to a bound") {
  const auto z23 = make_localization({2, 3});
  CHECK(z23.units_up_to(10) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 8, 9});
  CHECK(CoefficientRing::integers().units_up_to(10) == std::vector<std::int64_t>{1});
}

TEST_CASE("closure and norm axioms on random samples") {
  std::mt19937 rng(7);
  const auto ring = make_localization({2, 5});
  std::uniform_int_distribution<int> num(-50, 50);
  std::uniform_int_distribution<int> e2(0, 4), e5(0, 3);
  auto sample = [&] {
    long den = 1;
    for (int i = e2(rng); i > 0; --i) den *= 2;
    for (int i = e5(rng); i > 0; --i) den *= 5;
    return Rational(num(rng), den);
  };
  for (int trial = 0; trial < 500; ++trial) {
    const Rational a = sample(), b = sample();
    REQUIRE(ring.contains(a));
    CHECK(ring.contains(a + b));
    CHECK(ring.contains(a - b));
    CHECK(ring.contains(a * b));
    CHECK(ring_norm(a) >= 0);
    CHECK((ring_norm(a) == 0) == (a == 0));
    CHECK(ring_norm(a + b) <= ring_norm(a) + ring_norm(b));
    CHECK(ring_norm(a * b) == ring_norm(a) * ring_norm(b));
  }
}

TEST_CASE("scaling denominator divisibility") {
  std::mt19937 rng(11);
  const auto ring = make_localization({2, 3});
  std::uniform_int_distribution<int> e(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const long d1 = (1L << e(rng)) * (e(rng) ? 3 : 1);
    const long extra = (1L << e(rng)) * (e(rng) > 1 ? 9 : 1);
    const auto m1 = scaling_denominator(ring, row({Rational(1, d1)}));
    const auto m2 = scaling_denominator(ring, row({Rational(1, d1 * extra), Rational(5, d1)}));
    CHECK(m2 % m1 == 0);
  }
}
