// Seeded, splittable random streams. Every worker derives its own generator
// from (master seed, stream index) so results do not depend on scheduling.

#pragma once

#include <cstdint>
#include <random>

namespace entbound {

using Rng = std::mt19937_64;

/// One splitmix64 step.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of child stream `index` of `master`. Distinct indices give
/// statistically independent streams.
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace entbound
