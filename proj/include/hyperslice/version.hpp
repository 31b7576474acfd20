#pragma once

namespace hyperslice {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVersionString = "hyperslice 0.1.0";

}  // namespace hyperslice
