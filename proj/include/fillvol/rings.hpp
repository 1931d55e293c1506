#pragma once

// Subrings of Q: the integers, the rationals, and localizations Z_S obtained
// by inverting a finite set S of primes. All carry the absolute value norm.

#include "fillvol/types.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fillvol {

class CoefficientRing {
 public:
  enum class Kind { Integers, Rationals, Localization };

  static CoefficientRing integers() { return CoefficientRing(Kind::Integers, {}); }
  static CoefficientRing rationals() { return CoefficientRing(Kind::Rationals, {}); }

  [[nodiscard]] Kind kind() const { return kind_; }
  /// Sorted, distinct. Empty unless kind() == Localization.
  [[nodiscard]] const std::vector<std::uint64_t>& primes() const { return primes_; }

  [[nodiscard]] bool contains(const Rational& q) const;
  /// Positive integers that are units: products of the inverted primes.
  [[nodiscard]] bool is_unit(const Integer& m) const;

  /// Units m with 1 <= m <= bound, ascending. Rationals yields every integer.
  [[nodiscard]] std::vector<std::int64_t> units_up_to(std::int64_t bound) const;

  /// Round-trips through parse_ring: "z", "q", "zs:2,3".
  [[nodiscard]] std::string spec() const;

  bool operator==(const CoefficientRing&) const = default;

 private:
  friend CoefficientRing make_localization(const std::set<std::int64_t>& primes);
  CoefficientRing(Kind kind, std::vector<std::uint64_t> primes)
      : kind_(kind), primes_(std::move(primes)) {}

  Kind kind_;
  std::vector<std::uint64_t> primes_;
};

/// Throws NotPrime for any element that is not a prime.
CoefficientRing make_localization(const std::set<std::int64_t>& primes);

inline bool ring_contains(const CoefficientRing& ring, const Rational& q) { return ring.contains(q); }

/// Least positive unit m of the ring with m * entries integral. Throws
/// NotScalable when no unit clears the denominators.
Integer scaling_denominator(const CoefficientRing& ring, const MatrixQ& entries);

/// Parses the CLI ring syntax; throws InvalidArgument or NotPrime.
CoefficientRing parse_ring(std::string_view text);

bool is_prime(std::uint64_t n);

inline Rational ring_norm(const Rational& q) { return abs(q); }

}  // namespace fillvol
