#include "core/integrand.hpp"

#include "core/delta_calculus.hpp"

namespace tscalc {

Scalar AbsDeviationIntegrand::dense_integral(const Scalar& lo, const Scalar& hi) const {
  auto half = [](const Scalar& v) { return v / Scalar::from_int(2); };
  if (c_ <= lo) {
    // t - c throughout
    return half((hi - c_) * (hi - c_) - (lo - c_) * (lo - c_));
  }
  if (c_ >= hi) {
    return half((c_ - lo) * (c_ - lo) - (c_ - hi) * (c_ - hi));
  }
  return half((c_ - lo) * (c_ - lo) + (hi - c_) * (hi - c_));
}

Scalar PolyTimesDeltaDerivIntegrand::value_at(const Scalar& t) const {
  return p_.evaluate(t) * delta_derivative(scale_, f_, scale_.point(t));
}

Scalar DeltaDerivTimesSigmaIntegrand::value_at(const Scalar& t) const {
  ScalePoint pt = scale_.point(t);
  return delta_derivative(scale_, f_, pt) * g_.evaluate(scale_.sigma(pt));
}

} // namespace tscalc
