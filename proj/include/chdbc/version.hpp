#pragma once

namespace chdbc {

inline constexpr const char* kVersion = "chdbc 0.1.0";

// PRNG stream identifier recorded in run manifests: mt19937_64 with the
// 53-bit mapping u = (x >> 11) * 2^-53, so streams are identical across
// standard libraries.
inline constexpr const char* kRngId = "mt19937_64-u53";

}  // namespace chdbc
