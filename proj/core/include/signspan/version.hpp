#pragma once

namespace signspan {

inline constexpr const char* kVersion = "signspan 0.1.0";

}  // namespace signspan
