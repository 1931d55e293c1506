#include "fillvol/rings.hpp"

#include "fillvol/error.hpp"
#include "fillvol/lattice.hpp"

#include <charconv>

namespace fillvol {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

CoefficientRing make_localization(const std::set<std::int64_t>& primes) {
  std::vector<std::uint64_t> out;
  for (const auto p : primes) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
      throw NotPrime(std::to_string(p) + " is not prime");
    }
    out.push_back(static_cast<std::uint64_t>(p));
  }
  return CoefficientRing(CoefficientRing::Kind::Localization, std::move(out));
}

namespace {

// Strips every inverted prime from m; the ring contains 1/m iff the rest is 1.
Integer strip_primes(Integer m, const std::vector<std::uint64_t>& primes) {
  m = boost::multiprecision::abs(m);
  for (const auto p : primes) {
    const Integer prime(p);
    while (m != 0 && m % prime == 0) m /= prime;
  }
  return m;
}

}  // namespace

bool CoefficientRing::is_unit(const Integer& m) const {
  if (m == 0) return false;
  switch (kind_) {
    case Kind::Rationals:
      return true;
    case Kind::Integers:
      return boost::multiprecision::abs(m) == 1;
    case Kind::Localization:
      return strip_primes(m, primes_) == 1;
  }
  return false;
}

bool CoefficientRing::contains(const Rational& q) const {
  if (kind_ == Kind::Rationals) return true;
  return is_unit(denominator_of(q));
}

std::vector<std::int64_t> CoefficientRing::units_up_to(std::int64_t bound) const {
  std::vector<std::int64_t> out;
  for (std::int64_t m = 1; m <= bound; ++m)
    if (is_unit(Integer(m))) out.push_back(m);
  return out;
}

std::string CoefficientRing::spec() const {
  switch (kind_) {
    case Kind::Integers:
      return "z";
    case Kind::Rationals:
      return "q";
    case Kind::Localization: {
      std::string out = "zs:";
      for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(primes_[i]);
      }
      return out;
    }
  }
  return {};
}

Integer scaling_denominator(const CoefficientRing& ring, const MatrixQ& entries) {
  Integer m = 1;
  for (Index j = 0; j < entries.cols(); ++j)
    for (Index i = 0; i < entries.rows(); ++i) m = lattice::lcm(m, denominator_of(entries(i, j)));
  if (!ring.is_unit(m)) {
    throw NotScalable("denominator lcm " + m.str() + " is not a unit in " + ring.spec());
  }
  return m;
}

CoefficientRing parse_ring(std::string_view text) {
  if (text == "z") return CoefficientRing::integers();
  if (text == "q") return CoefficientRing::rationals();
  if (!text.starts_with("zs:")) throw InvalidArgument("unknown ring '" + std::string(text) + "'");
  std::set<std::int64_t> primes;
  std::string_view rest = text.substr(3);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw InvalidArgument("bad prime '" + std::string(item) + "' in ring spec");
    }
    primes.insert(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return make_localization(primes);
}

}  // namespace fillvol
