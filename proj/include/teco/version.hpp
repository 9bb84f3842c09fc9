#pragma once

namespace teco {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace teco
