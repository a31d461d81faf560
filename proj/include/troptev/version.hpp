#pragma once

namespace troptev {
inline constexpr const char* kVersion = "0.1.0";
}
