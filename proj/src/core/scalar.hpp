#pragma once

#include "core/rational.hpp"

#include <string>
#include <variant>

namespace tscalc {

enum class Backend { Rational, Float };

/// A number tagged with its arithmetic backend.
///
/// Rational scalars are exact and carry tolerance 0. Float scalars carry a
/// strictly positive comparison tolerance. Arithmetic between two rationals
/// stays rational; any operation touching a float operand yields a float
/// whose tolerance is the larger of the operand tolerances.
class Scalar {
public:
  Scalar() : rep_(Rational(0)) {}

  static Scalar from_rational(Rational r) { return Scalar(std::move(r)); }
  static Scalar from_int(long long v) { return Scalar(Rational(v)); }
  static Scalar from_double(double value, double tolerance);

  Backend backend() const {
    return std::holds_alternative<Rational>(rep_) ? Backend::Rational : Backend::Float;
  }
  bool is_rational() const { return backend() == Backend::Rational; }

  /// Requires backend() == Rational.
  const Rational& rational_value() const;

  double as_double() const;
  /// 0 for rational scalars, the declared tolerance otherwise.
  double tolerance() const;

  Scalar operator-() const;
  Scalar abs() const;
  bool is_zero() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  /// -1, 0, +1. Exact when both operands are rational, double otherwise.
  friend int compare(const Scalar& a, const Scalar& b);

  bool operator==(const Scalar& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Scalar& o) const { return compare(*this, o) != 0; }
  bool operator<(const Scalar& o) const { return compare(*this, o) < 0; }
  bool operator<=(const Scalar& o) const { return compare(*this, o) <= 0; }
  bool operator>(const Scalar& o) const { return compare(*this, o) > 0; }
  bool operator>=(const Scalar& o) const { return compare(*this, o) >= 0; }

  /// |a - b| <= tol, evaluated exactly for rational pairs.
  bool approx_equal(const Scalar& o, double tol) const;

  /// "p" or "p/q" for rationals; shortest round-trip decimal for floats.
  std::string to_string() const;

private:
  struct FloatRep {
    double value;
    double tol;
  };

  explicit Scalar(Rational r) : rep_(std::move(r)) {}
  explicit Scalar(FloatRep f) : rep_(f) {}

  std::variant<Rational, FloatRep> rep_;
};

Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

} // namespace tscalc
