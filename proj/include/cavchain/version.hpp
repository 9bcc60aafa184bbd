#pragma once

namespace cavchain {

inline constexpr const char* kToolName = "cavchain";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace cavchain
