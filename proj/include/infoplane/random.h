#pragma once

#include <cstdint>
#include <random>

namespace infoplane {

using Rng = std::mt19937_64;

// Uniform on the open interval (0, 1) from the top 53 bits of one draw.
inline double OpenUniform(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace infoplane
