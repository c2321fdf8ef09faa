#pragma once

#include <string_view>

namespace varshrink {

inline constexpr std::string_view version = "0.1.0";

}  // namespace varshrink
