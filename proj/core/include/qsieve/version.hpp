#pragma once

namespace qsieve {
inline constexpr const char* kVersion = "0.1.0";
}
