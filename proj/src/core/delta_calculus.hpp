#pragma once

#include "core/function_spec.hpp"
#include "core/integrand.hpp"
#include "core/time_scale.hpp"

namespace tscalc {

/// Delta derivative of f at t: the forward difference quotient
/// (f(sigma(t)) - f(t)) / mu(t) at right-scattered points, the classical
/// derivative at right-dense points. t must lie in the scale with its
/// left-scattered maximum removed.
Scalar delta_derivative(const TimeScale& scale, const FunctionSpec& f, const ScalePoint& t);

/// Delta integral of an integrand over [a, b] ∩ scale: scattered points of
/// [a, b) weighted by their graininess plus exact classical integrals over
/// dense runs. Orientation follows the endpoints: a > b flips the sign,
/// a == b yields 0.
Scalar delta_integral(const TimeScale& scale, const Integrand& g, const ScalePoint& a,
                      const ScalePoint& b);

enum class HkMethod { Recursive, ClosedForm };

struct HkValue {
  unsigned k;
  Scalar t;
  Scalar s;
  Scalar value;
  HkMethod method;
};

/// Monomial h_k(t, s) by the recursion h_0 = 1,
/// h_{k+1}(t, s) = integral from s to t of h_k(tau, s); both t and s must be
/// scale members. Uses a per-call read-through memo.
HkValue monomial_hk(const TimeScale& scale, unsigned k, const ScalePoint& t, const ScalePoint& s);

/// Closed form of h_2 for the canonical families, as a plain polynomial
/// expression: reals (t-s)^2/2, integers (t-s)(t-s-1)/2, q-lattice
/// (t-s)(t-qs)/(1+q) with q > 1. Arguments need not be scale members.
Scalar h2_closed_form(FamilyKind family, const Scalar& q, const Scalar& t, const Scalar& s);

} // namespace tscalc
