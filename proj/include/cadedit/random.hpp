#pragma once

// Portable deterministic helpers. std::*_distribution output is
// implementation-defined, so everything that must be byte-stable across
// toolchains draws through these instead.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cadedit {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Integer in [lo, hi] inclusive.
inline int uniform_int(Rng& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng() % items.size()];
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng() % i]);
  }
}

/// FNV-1a, 64 bit. Stable hash for split assignment, seeding and lookups.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cadedit
