#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace isadre::rngutil {

using Engine = std::mt19937_64;

// Uniform in [0, 1) built from the top 53 bits; avoids the distribution
// objects so that a fixed seed replays identically across runs.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Box-Muller without the cached second draw; stateless between calls.
inline double normal(Engine& eng) {
  double u1 = uniform01(eng);
  double u2 = uniform01(eng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline void fill_normal(Engine& eng, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = normal(eng);
}

}  // namespace isadre::rngutil
