#pragma once

#include "core/function_spec.hpp"
#include "core/polynomial.hpp"
#include "core/time_scale.hpp"

namespace tscalc {

/// What the delta integral needs from an integrand: a pointwise value at
/// right-scattered points, and an exact classical integral over a run that is
/// entirely dense (where the forward jump is the identity).
class Integrand {
public:
  virtual ~Integrand() = default;
  virtual Scalar value_at(const Scalar& t) const = 0;
  virtual Scalar dense_integral(const Scalar& lo, const Scalar& hi) const = 0;
};

/// g(t) for a polynomial g.
class PolyIntegrand final : public Integrand {
public:
  explicit PolyIntegrand(Polynomial p) : p_(std::move(p)) {}
  Scalar value_at(const Scalar& t) const override { return p_.evaluate(t); }
  Scalar dense_integral(const Scalar& lo, const Scalar& hi) const override {
    return p_.integral(lo, hi);
  }

private:
  Polynomial p_;
};

/// g(sigma(t)); on dense runs sigma is the identity.
class SigmaComposedIntegrand final : public Integrand {
public:
  SigmaComposedIntegrand(const TimeScale& scale, Polynomial p)
      : scale_(scale), p_(std::move(p)) {}
  Scalar value_at(const Scalar& t) const override {
    return p_.evaluate(scale_.sigma(scale_.point(t)));
  }
  Scalar dense_integral(const Scalar& lo, const Scalar& hi) const override {
    return p_.integral(lo, hi);
  }

private:
  const TimeScale& scale_;
  Polynomial p_;
};

/// |t - c|; the dense integral splits analytically at c, so only polynomial
/// pieces are ever integrated.
class AbsDeviationIntegrand final : public Integrand {
public:
  explicit AbsDeviationIntegrand(Scalar c) : c_(std::move(c)) {}
  Scalar value_at(const Scalar& t) const override { return (t - c_).abs(); }
  Scalar dense_integral(const Scalar& lo, const Scalar& hi) const override;

private:
  Scalar c_;
};

/// p(t) * fdelta(t) where fdelta is the delta derivative of f: the scattered
/// difference quotient at right-scattered points, the classical derivative on
/// dense runs.
class PolyTimesDeltaDerivIntegrand final : public Integrand {
public:
  PolyTimesDeltaDerivIntegrand(const TimeScale& scale, Polynomial p, const FunctionSpec& f)
      : scale_(scale), p_(std::move(p)), f_(f), dense_product_(p_ * f.classical_derivative()) {}
  Scalar value_at(const Scalar& t) const override;
  Scalar dense_integral(const Scalar& lo, const Scalar& hi) const override {
    return dense_product_.integral(lo, hi);
  }

private:
  const TimeScale& scale_;
  Polynomial p_;
  const FunctionSpec& f_;
  Polynomial dense_product_;
};

/// fdelta(t) * g(sigma(t)); the integration-by-parts counterpart.
class DeltaDerivTimesSigmaIntegrand final : public Integrand {
public:
  DeltaDerivTimesSigmaIntegrand(const TimeScale& scale, const FunctionSpec& f, Polynomial g)
      : scale_(scale), f_(f), g_(std::move(g)),
        dense_product_(f.classical_derivative() * g_) {}
  Scalar value_at(const Scalar& t) const override;
  Scalar dense_integral(const Scalar& lo, const Scalar& hi) const override {
    return dense_product_.integral(lo, hi);
  }

private:
  const TimeScale& scale_;
  const FunctionSpec& f_;
  Polynomial g_;
  Polynomial dense_product_;
};

} // namespace tscalc
