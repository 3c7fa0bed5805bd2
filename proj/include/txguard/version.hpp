#pragma once

namespace txguard {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace txguard
