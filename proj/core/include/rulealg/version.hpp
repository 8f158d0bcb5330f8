#pragma once

namespace rulealg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rulealg
