#pragma once

namespace bif {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bif
