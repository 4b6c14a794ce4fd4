#include "core/rational.hpp"

#include "core/errors.hpp"

#include <cctype>

namespace tscalc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// cpp_int's string constructor follows C literal rules, so a leading zero
// would flip the radix to octal ("025" -> 21, "018" -> throw); trim to the
// last zero before handing digits over.
std::string_view strip_leading_zeros(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return s;
}

std::optional<BigInt> parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) return std::nullopt;
  BigInt v{std::string(strip_leading_zeros(s))};
  if (negative) v = -v;
  return v;
}

// mantissa[.fraction][e|E exponent]
std::optional<Rational> parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exp10 = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    auto etext = s.substr(epos + 1);
    auto ev = parse_integer(etext);
    if (!ev || *ev > 4096 || *ev < -4096) return std::nullopt;
    exp10 = static_cast<long>(*ev);
    s = s.substr(0, epos);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto frac = s.substr(dot + 1);
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    exp10 -= static_cast<long>(frac.size());
    digits = std::string(s.substr(0, dot)) + std::string(frac);
  } else {
    digits = std::string(s);
  }
  if (!all_digits(digits)) return std::nullopt;
  Rational value{BigInt{std::string(strip_leading_zeros(digits))}};
  Rational scale = rational_pow(Rational(10), exp10);
  value *= scale;
  if (negative) value = -value;
  return value;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  if (text.find('.') != std::string_view::npos || text.find('e') != std::string_view::npos ||
      text.find('E') != std::string_view::npos) {
    return parse_decimal(text);
  }
  auto v = parse_integer(text);
  if (!v) return std::nullopt;
  return Rational(*v);
}

std::string format_rational(const Rational& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0 && exponent < 0) throw DomainError("zero base with negative exponent");
  Rational b = exponent > 0 ? base : Rational(1) / base;
  unsigned long n = exponent > 0 ? static_cast<unsigned long>(exponent)
                                 : static_cast<unsigned long>(-exponent);
  Rational acc(1);
  while (n > 0) {
    if (n & 1u) acc *= b;
    b *= b;
    n >>= 1u;
  }
  return acc;
}

} // namespace tscalc
