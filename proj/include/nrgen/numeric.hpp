#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace nrgen {

/// Exact integers for weights, masses and ranks.
using BigInt = boost::multiprecision::mpz_int;
/// Exact rationals for terminal weights and probabilities.
using Rational = boost::multiprecision::mpq_rational;

/// Parses `p/q`, an integer, or a decimal literal (`0.25`) into an exact
/// rational. Decimal digits are read exactly, never through a binary float.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Nonnegative decimal integer; leading zeros are allowed. Throws
/// std::invalid_argument otherwise.
BigInt parse_natural(std::string_view digits);

/// `p/q`, or just `p` when the denominator is 1.
std::string to_string(const Rational& value);

inline std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace nrgen
