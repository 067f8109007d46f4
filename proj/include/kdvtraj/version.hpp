#pragma once

namespace kdvtraj {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kdvtraj
