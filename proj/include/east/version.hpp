#pragma once

namespace eastsim {
inline constexpr const char* kVersion = "0.1.0";
}
