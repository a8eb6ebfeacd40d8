#pragma once

namespace detproj {

inline constexpr const char* version = "0.1.0";

}  // namespace detproj
