#pragma once

namespace psb {

inline constexpr const char* version = "0.1.0";

} // namespace psb
