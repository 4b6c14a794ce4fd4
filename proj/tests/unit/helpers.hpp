#pragma once

#include "core/function_spec.hpp"
#include "core/serde.hpp"
#include "core/time_scale.hpp"

#include <string>

namespace tst {

using namespace tscalc;

/// Exact rational scalar from text ("7/2", "-0.25", "3").
inline Scalar R(const std::string& text) {
  return scalar_from_text(text, Backend::Rational, 0.0);
}

/// Float scalar with a declared tolerance.
inline Scalar F(double value, double tol = 1e-9) { return Scalar::from_double(value, tol); }

inline TimeScale scale_from(const std::string& json_text) {
  return TimeScale::from_spec_json(Json::parse(json_text));
}

inline FunctionSpec fn_from(const std::string& json_text) {
  return FunctionSpec::from_json(Json::parse(json_text));
}

/// Rational-backend integer slice {a, a+1, ..., b}.
inline TimeScale integer_slice(long long a, long long b) {
  Json spec = {{"components", Json::array({Json{{"integers", Json{{"a", a}, {"b", b}}}}})},
               {"backend", "rational"}};
  return TimeScale::from_spec_json(spec);
}

/// Rational-backend q-lattice {q^m, ..., q^n}.
inline TimeScale q_lattice(const std::string& q, int m, int n) {
  Json spec = {
      {"components", Json::array({Json{{"qlattice", Json{{"q", q}, {"m", m}, {"n", n}}}}})},
      {"backend", "rational"}};
  return TimeScale::from_spec_json(spec);
}

/// Rational-backend closed interval [lo, hi].
inline TimeScale real_interval(const std::string& lo, const std::string& hi) {
  Json spec = {{"components", Json::array({Json{{"interval", Json::array({lo, hi})}}})},
               {"backend", "rational"}};
  return TimeScale::from_spec_json(spec);
}

} // namespace tst
