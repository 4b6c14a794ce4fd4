#include "core/function_spec.hpp"

#include "core/errors.hpp"
#include "core/serde.hpp"

namespace tscalc {

FunctionSpec FunctionSpec::polynomial(std::vector<Scalar> coeffs) {
  return FunctionSpec(Kind::Poly, Polynomial(std::move(coeffs)));
}

FunctionSpec FunctionSpec::identity() {
  return FunctionSpec(Kind::Identity, Polynomial::identity());
}

FunctionSpec FunctionSpec::constant(Scalar c) {
  return FunctionSpec(Kind::Constant, Polynomial::constant(std::move(c)));
}

FunctionSpec FunctionSpec::from_json(const Json& doc) {
  if (!doc.is_object()) throw SpecError("function spec must be a JSON object");
  if (doc.contains("poly")) {
    const auto& arr = doc.at("poly");
    if (!arr.is_array() || arr.empty()) throw SpecError("\"poly\" must be a non-empty array");
    std::vector<Scalar> coeffs;
    coeffs.reserve(arr.size());
    for (const auto& c : arr) {
      // coefficients are kept exact; float promotion happens at evaluation
      coeffs.push_back(scalar_from_json(c, Backend::Rational, 0.0));
    }
    return polynomial(std::move(coeffs));
  }
  if (doc.contains("builtin")) {
    const auto& b = doc.at("builtin");
    if (b.is_string()) {
      auto name = b.get<std::string>();
      if (name == "identity") return identity();
      throw SpecError("unknown builtin \"" + name + "\"");
    }
    if (b.is_object() && b.contains("constant")) {
      return constant(scalar_from_json(b.at("constant"), Backend::Rational, 0.0));
    }
    throw SpecError("malformed builtin function spec");
  }
  throw SpecError("function spec needs \"poly\" or \"builtin\"");
}

Json FunctionSpec::to_json() const {
  switch (kind_) {
    case Kind::Identity:
      return Json{{"builtin", "identity"}};
    case Kind::Constant: {
      Scalar c = poly_.is_zero() ? Scalar::from_int(0) : poly_.coefficients()[0];
      return Json{{"builtin", Json{{"constant", scalar_to_json(c)}}}};
    }
    case Kind::Poly:
      break;
  }
  Json arr = Json::array();
  if (poly_.is_zero()) {
    arr.push_back("0");
  } else {
    for (const auto& c : poly_.coefficients()) arr.push_back(scalar_to_json(c));
  }
  return Json{{"poly", arr}};
}

} // namespace tscalc
