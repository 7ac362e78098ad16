#pragma once

namespace thermogeo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace thermogeo
