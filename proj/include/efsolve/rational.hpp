#pragma once

// Exact rational arithmetic. Every probability, payoff and LP coefficient in
// the library is a Rational; floating point never enters a membership
// decision.

#include <gmpxx.h>

#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace efsolve {

using Rational = mpq_class;

// Raised for malformed numeric literals.
class RationalParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parses "3", "-1", "5/2" exactly. Decimal points, exponents and whitespace
// are rejected so that no literal is silently rounded.
inline Rational ParseRational(const std::string& text) {
  static const std::regex kPattern(R"(^-?[0-9]+(/[0-9]+)?$)");
  if (!std::regex_match(text, kPattern)) {
    throw RationalParseError("not an exact rational literal: '" + text + "'");
  }
  auto slash = text.find('/');
  if (slash != std::string::npos &&
      text.find_first_not_of('0', slash + 1) == std::string::npos) {
    throw RationalParseError("zero denominator in '" + text + "'");
  }
  Rational value(text, 10);
  value.canonicalize();
  return value;
}

// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
inline std::string FormatRational(const Rational& value) {
  Rational copy(value);
  copy.canonicalize();
  return copy.get_str();
}

inline Rational Sum(const std::vector<Rational>& values) {
  Rational total(0);
  for (const Rational& v : values) total += v;
  return total;
}

// Renders value * 100 with exactly `decimals` fractional digits, rounding
// half away from zero, e.g. 451/500 at one decimal -> "90.2".
inline std::string FormatPercent(const Rational& share, int decimals) {
  Rational scaled = share * 100;
  mpz_class pow10 = 1;
  for (int i = 0; i < decimals; ++i) pow10 *= 10;
  scaled *= pow10;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  // floor(scaled + 1/2)
  Rational shifted = scaled + Rational(1, 2);
  mpz_class rounded = shifted.get_num() / shifted.get_den();
  std::string digits = rounded.get_str();
  if (decimals > 0) {
    if (static_cast<int>(digits.size()) <= decimals) {
      digits.insert(0, decimals + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - decimals, ".");
  }
  return (negative && rounded != 0 ? "-" : "") + digits;
}

}  // namespace efsolve
