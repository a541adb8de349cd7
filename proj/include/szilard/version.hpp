#pragma once

namespace szilard {

inline constexpr const char* kToolName = "szilard";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace szilard
