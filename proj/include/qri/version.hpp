#pragma once

namespace qri {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qri
