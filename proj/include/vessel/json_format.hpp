#pragma once

#include <string>

#include "json.hpp"

namespace vessel {

/// Serializes like nlohmann::json::dump but prints every floating-point
/// number with exactly six decimals, so reports diff byte-for-byte.
std::string dump_fixed(const nlohmann::json& j, int indent = 2);

}  // namespace vessel
