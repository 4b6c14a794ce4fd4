#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace tscalc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q", or a plain decimal ("-0.25", "2.5e3") into an exact
/// rational. Returns nullopt on malformed text or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q" with q > 0.
std::string format_rational(const Rational& r);

/// base^exponent for integer exponents of either sign; base must be nonzero
/// when exponent < 0.
Rational rational_pow(const Rational& base, long exponent);

} // namespace tscalc
