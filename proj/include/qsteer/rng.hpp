#pragma once

// Seeded, reproducible randomness. Streams are derived from a 64-bit user
// seed plus a tag via splitmix64 and drive a mt19937_64. Uniform and normal
// draws are built from the raw 64-bit output directly, so identical seeds
// give identical results on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace qsteer {

// Generator identity, recorded in run metadata.
inline constexpr std::string_view kRngId = "splitmix64/mt19937_64/inverse-cdf";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (seed, tag).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t tag) {
  return std::mt19937_64(derive_stream(seed, tag));
}

/// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(engine);
}

/// Standard normal draw via Box-Muller; consumes two uniforms per call.
inline double normal_sample(std::mt19937_64& engine) {
  double u1 = uniform_unit(engine);
  while (u1 == 0.0) u1 = uniform_unit(engine);
  const double u2 = uniform_unit(engine);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace qsteer
