#pragma once

#include "core/json.hpp"
#include "core/scalar.hpp"

namespace tscalc {

/// Reads a JSON number or numeric string into a Scalar of the given backend.
/// Rational backend: strings "p/q"/"p"/decimals and integral JSON numbers are
/// exact; non-integral JSON numbers are rejected (lossy). Float backend:
/// anything numeric, converted to double with the given tolerance.
Scalar scalar_from_json(const Json& v, Backend backend, double tolerance);

/// Rational scalars serialize as "p/q" strings; float scalars as numbers.
Json scalar_to_json(const Scalar& s);

/// Parses CLI-style numeric text ("1/3", "0.25") under a backend.
Scalar scalar_from_text(const std::string& text, Backend backend, double tolerance);

} // namespace tscalc
