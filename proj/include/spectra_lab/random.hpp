#pragma once

#include <cstdint>

namespace spectra_lab {

// splitmix64 output function; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Derives the seed of sub-stream `stream` (replicate, MC batch, ...) from `seed`.
//   mix_seed(s, r) = splitmix64(s ^ splitmix64(r + 0x9E3779B97F4A7C15))
// Sub-stream seeds depend only on (s, r), never on scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace spectra_lab
