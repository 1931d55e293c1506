#include "fillvol/types.hpp"

#include "fillvol/error.hpp"

#include <cctype>

namespace fillvol {

IntegralChain scale(const IntegralChain& c, std::int64_t factor) {
  IntegralChain out;
  out.degree = c.degree;
  if (factor == 0) return out;
  out.terms.reserve(c.terms.size());
  for (const auto& [index, coeff] : c.terms) out.terms.emplace_back(index, coeff * factor);
  return out;
}

Chain to_rational(const IntegralChain& c) {
  Chain out;
  out.degree = c.degree;
  out.terms.reserve(c.terms.size());
  for (const auto& [index, coeff] : c.terms) out.terms.emplace_back(index, Rational(coeff));
  return out;
}

Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }
bool is_integral(const Rational& q) { return denominator_of(q) == 1; }

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Rational& q) {
  if (is_integral(q)) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw SyntaxError("BadRational", 0, 0, std::string(whole));
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw SyntaxError("BadRational", 0, 0, std::string(whole));
    }
  }
  return Integer(std::string(text[0] == '+' ? text.substr(1) : text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const Integer num = parse_integer(text.substr(0, slash), text);
  const Integer den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw SyntaxError("BadRational", 0, 0, "zero denominator in " + std::string(text));
  return Rational(num, den);
}

}  // namespace fillvol
