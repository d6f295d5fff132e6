#pragma once

namespace wint {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace wint
