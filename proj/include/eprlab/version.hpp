#pragma once

namespace eprlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eprlab
