#pragma once

#include <string>
#include <string_view>

#include "kdv/features.hpp"

namespace kdv {

// {"user": ..., "platforms": [...], "sessions": [...],
//  "features": {"U:a": [...], "D:a|b": [...], "W:hi": [...]}}
std::string profile_to_json(const FeatureDictionary& profile, int indent = -1);

// Throws INVALID_ARGUMENT on schema violations (including empty value lists).
FeatureDictionary profile_from_json(std::string_view text);

}  // namespace kdv
