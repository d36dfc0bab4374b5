#pragma once

namespace tscore {
inline constexpr const char* kVersion = "0.1.0";
}
