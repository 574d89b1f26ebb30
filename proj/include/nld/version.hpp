#pragma once

namespace nld {

inline constexpr const char* version = "0.1.0";

} // namespace nld
