#pragma once

#include "core/json.hpp"
#include "core/polynomial.hpp"

namespace tscalc {

/// A concrete real function the engine can evaluate and differentiate
/// symbolically: a polynomial, or one of the named builtins (identity,
/// constant). Builtins materialize to polynomials internally; the original
/// kind is kept for canonical serialization.
class FunctionSpec {
public:
  static FunctionSpec polynomial(std::vector<Scalar> coeffs);
  static FunctionSpec identity();
  static FunctionSpec constant(Scalar c);

  /// {"poly": ["c0", "c1", ...]} | {"builtin": "identity"}
  /// | {"builtin": {"constant": "c"}}
  static FunctionSpec from_json(const Json& doc);
  Json to_json() const;

  const Polynomial& poly() const { return poly_; }
  Scalar evaluate(const Scalar& x) const { return poly_.evaluate(x); }
  Polynomial classical_derivative() const { return poly_.derivative(); }

  /// True for the builtin identity and for the polynomial x.
  bool is_identity() const { return poly_.is_identity(); }

private:
  enum class Kind { Poly, Identity, Constant };
  FunctionSpec(Kind kind, Polynomial p) : kind_(kind), poly_(std::move(p)) {}

  Kind kind_;
  Polynomial poly_;
};

} // namespace tscalc
