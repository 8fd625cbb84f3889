#pragma once

// JSON encoding helpers shared by the library, the CLI and the bindings.

#include <json.hpp>

#include "bratteli/numeric.hpp"

namespace bratteli {

// Integers within 2^53 become JSON numbers, larger ones decimal strings.
nlohmann::ordered_json bigint_to_json(const BigInt& value);
BigInt bigint_from_json(const nlohmann::ordered_json& node);
nlohmann::ordered_json intvector_to_json(const IntVector& v);
nlohmann::ordered_json matrix_to_json(const IntMatrix& m);

}  // namespace bratteli
