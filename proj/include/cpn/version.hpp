#pragma once

namespace cpn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cpn
