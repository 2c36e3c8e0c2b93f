#pragma once

namespace persim {

inline constexpr const char *kVersion = "0.1.0";

} // namespace persim
