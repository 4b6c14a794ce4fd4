#pragma once

#include "core/scalar.hpp"

#include <vector>

namespace tscalc {

/// Dense univariate polynomial with Scalar coefficients, ascending by degree.
/// Coefficients are normally exact rationals; evaluation at a float argument
/// promotes through Scalar arithmetic.
class Polynomial {
public:
  Polynomial() = default; // zero polynomial
  explicit Polynomial(std::vector<Scalar> coeffs);

  static Polynomial constant(Scalar c);
  static Polynomial identity(); // x

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }

  Scalar evaluate(const Scalar& x) const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  /// Classical definite integral over [lo, hi].
  Scalar integral(const Scalar& lo, const Scalar& hi) const;

  Polynomial scaled(const Scalar& c) const;
  /// p(x + c) is not needed; only ring operations are.
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  /// Exactly x: coefficients [0, 1].
  bool is_identity() const;

  bool operator==(const Polynomial& o) const;

private:
  void trim();
  std::vector<Scalar> coeffs_;
};

} // namespace tscalc
