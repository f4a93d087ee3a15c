#pragma once

#include <cstdint>
#include <random>

namespace gns {

/// One splitmix64 step; used only to whiten seeds for stream derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr const char* rng_algorithm_id = "mt19937_64+splitmix64-streams";

/// Deterministic per-stream engine: stream k of a base seed is an mt19937_64
/// seeded from splitmix64 applied to (seed, k).  Stream 0 seeds the
/// livepoint draw; stream i seeds the chain of nested-sampling iteration i.
inline std::mt19937_64 make_rng_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  (void)splitmix64_next(s);
  s ^= 0xD1B54A32D192ED03ull * (stream + 1);
  const std::uint64_t derived = splitmix64_next(s);
  return std::mt19937_64(derived);
}

}  // namespace gns
