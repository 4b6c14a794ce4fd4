#include "core/scalar.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace tscalc {

Scalar Scalar::from_double(double value, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("float scalar requires a strictly positive tolerance");
  if (!std::isfinite(value)) throw DomainError("float scalar must be finite");
  return Scalar(FloatRep{value, tolerance});
}

const Rational& Scalar::rational_value() const {
  if (auto* r = std::get_if<Rational>(&rep_)) return *r;
  throw DomainError("scalar is not rational");
}

double Scalar::as_double() const {
  if (auto* r = std::get_if<Rational>(&rep_)) return static_cast<double>(*r);
  return std::get<FloatRep>(rep_).value;
}

double Scalar::tolerance() const {
  if (std::holds_alternative<Rational>(rep_)) return 0.0;
  return std::get<FloatRep>(rep_).tol;
}

Scalar Scalar::operator-() const {
  if (auto* r = std::get_if<Rational>(&rep_)) return Scalar(Rational(-*r));
  auto f = std::get<FloatRep>(rep_);
  return Scalar(FloatRep{-f.value, f.tol});
}

Scalar Scalar::abs() const {
  if (auto* r = std::get_if<Rational>(&rep_)) return Scalar(Rational(boost::multiprecision::abs(*r)));
  auto f = std::get<FloatRep>(rep_);
  return Scalar(FloatRep{std::fabs(f.value), f.tol});
}

bool Scalar::is_zero() const {
  if (auto* r = std::get_if<Rational>(&rep_)) return *r == 0;
  return std::get<FloatRep>(rep_).value == 0.0;
}

namespace {

double merged_tol(const Scalar& a, const Scalar& b) {
  double t = std::max(a.tolerance(), b.tolerance());
  return t > 0.0 ? t : 1e-12; // unreachable for well-formed floats; keep positive
}

} // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational())
    return Scalar::from_rational(a.rational_value() + b.rational_value());
  return Scalar::from_double(a.as_double() + b.as_double(), merged_tol(a, b));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational())
    return Scalar::from_rational(a.rational_value() - b.rational_value());
  return Scalar::from_double(a.as_double() - b.as_double(), merged_tol(a, b));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational())
    return Scalar::from_rational(a.rational_value() * b.rational_value());
  return Scalar::from_double(a.as_double() * b.as_double(), merged_tol(a, b));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (a.is_rational() && b.is_rational())
    return Scalar::from_rational(a.rational_value() / b.rational_value());
  return Scalar::from_double(a.as_double() / b.as_double(), merged_tol(a, b));
}

int compare(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) {
    const auto& x = a.rational_value();
    const auto& y = b.rational_value();
    if (x < y) return -1;
    if (y < x) return 1;
    return 0;
  }
  double x = a.as_double();
  double y = b.as_double();
  if (x < y) return -1;
  if (y < x) return 1;
  return 0;
}

bool Scalar::approx_equal(const Scalar& o, double tol) const {
  if (is_rational() && o.is_rational()) {
    Rational diff = boost::multiprecision::abs(rational_value() - o.rational_value());
    // exact comparison against the tolerance as a rational
    auto t = parse_rational(format_double(tol));
    return t ? diff <= *t : static_cast<double>(diff) <= tol;
  }
  return std::fabs(as_double() - o.as_double()) <= tol;
}

std::string Scalar::to_string() const {
  if (auto* r = std::get_if<Rational>(&rep_)) return format_rational(*r);
  return format_double(std::get<FloatRep>(rep_).value);
}

Scalar min(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0 ? a : b; }
Scalar max(const Scalar& a, const Scalar& b) { return compare(a, b) >= 0 ? a : b; }

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

} // namespace tscalc
