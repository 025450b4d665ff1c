#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace smmdist {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or "p" with optional sign. Rejects zero denominators and any
// trailing garbage.
std::optional<Rational> try_parse_rational(const std::string& text);

// Throwing variant of try_parse_rational.
Rational parse_rational(const std::string& text);

// "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double value);

// 17 significant digits, enough to round-trip an IEEE double.
std::string format_real(double value);

}  // namespace smmdist
