#include "rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace smmdist {

namespace {

bool parse_integer(const std::string& text, BigInt& out) {
  if (text.empty()) return false;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') i = 1;
  if (i == text.size()) return false;
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) return false;
  }
  out = BigInt(text);
  return true;
}

}  // namespace

std::optional<Rational> try_parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  BigInt num;
  if (slash == std::string::npos) {
    if (!parse_integer(text, num)) return std::nullopt;
    return Rational(num);
  }
  BigInt den;
  if (!parse_integer(text.substr(0, slash), num)) return std::nullopt;
  if (!parse_integer(text.substr(slash + 1), den)) return std::nullopt;
  if (den == 0) return std::nullopt;
  return Rational(num, den);
}

Rational parse_rational(const std::string& text) {
  auto r = try_parse_rational(text);
  if (!r) throw std::invalid_argument("malformed rational: '" + text + "'");
  return *r;
}

std::string format_rational(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  if (value == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(value, &exp);
  // mant * 2^53 is an exact integer for any finite double
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r{BigInt(scaled)};
  const int shift = exp - 53;
  if (shift >= 0) {
    r *= Rational(BigInt(1) << shift);
  } else {
    r /= Rational(BigInt(1) << -shift);
  }
  return r;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace smmdist
