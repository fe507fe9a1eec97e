#pragma once

namespace adcsim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace adcsim
