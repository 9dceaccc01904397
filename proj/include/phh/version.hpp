#pragma once

namespace phh {

inline constexpr const char* kVersion = "0.1.0";

}
