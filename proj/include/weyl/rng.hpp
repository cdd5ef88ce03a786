#pragma once

#include <cstdint>
#include <random>

namespace weyl {

inline constexpr std::uint64_t kDefaultSeed = 42;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for the `stream`-th independent draw under `seed`. Counter-based, so a
/// sample's randomness does not depend on which thread computes it.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0,1) from 53 random bits; std::uniform_real_distribution is not
/// specified bit-for-bit across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline int random_sign(std::mt19937_64& rng) { return (rng() >> 63) ? 1 : -1; }

/// Uniform integer in [0, n) via rejection; portable unlike uniform_int_distribution.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % n;
}

/// Standard normal via Box-Muller on uniform01 (portable, deterministic).
double standard_normal(std::mt19937_64& rng);

}  // namespace weyl
