#pragma once

namespace stoqbell {

inline constexpr const char* version = "0.1.0";

}  // namespace stoqbell
