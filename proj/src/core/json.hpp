#pragma once

#include <json.hpp>

namespace tscalc {

// ordered_json keeps insertion order on emission, so serialized documents are
// byte-stable across runs.
using Json = nlohmann::ordered_json;

} // namespace tscalc
