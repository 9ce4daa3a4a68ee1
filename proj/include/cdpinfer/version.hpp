#pragma once

namespace cdp {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cdp
