#pragma once

namespace hamjac {
inline constexpr const char* kVersion = "0.1.0";
}
