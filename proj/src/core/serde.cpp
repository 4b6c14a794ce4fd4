#include "core/serde.hpp"

#include "core/errors.hpp"

#include <cmath>

namespace tscalc {

Scalar scalar_from_json(const Json& v, Backend backend, double tolerance) {
  if (v.is_string()) {
    return scalar_from_text(v.get<std::string>(), backend, tolerance);
  }
  if (v.is_number_integer()) {
    long long n = v.get<long long>();
    if (backend == Backend::Rational) return Scalar::from_int(n);
    return Scalar::from_double(static_cast<double>(n), tolerance);
  }
  if (v.is_number_float()) {
    if (backend == Backend::Rational) {
      throw SpecError("rational backend requires exact numbers; write \"" + v.dump() +
                      "\" as a \"p/q\" string");
    }
    return Scalar::from_double(v.get<double>(), tolerance);
  }
  throw SpecError("expected a number, got " + v.dump());
}

Json scalar_to_json(const Scalar& s) {
  if (s.is_rational()) return Json(s.to_string());
  return Json(s.as_double());
}

Scalar scalar_from_text(const std::string& text, Backend backend, double tolerance) {
  auto r = parse_rational(text);
  if (backend == Backend::Rational) {
    if (!r) throw SpecError("malformed rational \"" + text + "\"");
    return Scalar::from_rational(*r);
  }
  if (r) return Scalar::from_double(static_cast<double>(*r), tolerance);
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size() || !std::isfinite(v)) throw SpecError("malformed number \"" + text + "\"");
    return Scalar::from_double(v, tolerance);
  } catch (const std::exception&) {
    throw SpecError("malformed number \"" + text + "\"");
  }
}

} // namespace tscalc
