#pragma once

namespace miab {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace miab
