#pragma once

namespace liability {

inline constexpr const char kVersion[] = "1.0.0";

}  // namespace liability
