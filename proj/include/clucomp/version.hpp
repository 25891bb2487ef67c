#pragma once

namespace clucomp {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace clucomp
