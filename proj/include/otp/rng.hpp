#pragma once

#include <cstdint>
#include <random>

namespace otp {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-trial stream: experiment seed XOR trial index.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return seed ^ trial;
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

}  // namespace otp
