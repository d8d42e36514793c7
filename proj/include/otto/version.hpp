#pragma once

namespace otto {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace otto
