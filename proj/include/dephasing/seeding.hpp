#pragma once

#include <cstdint>

namespace dephasing {

/// splitmix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of grid point g: splitmix64(splitmix64(base) ^ g).
constexpr std::uint64_t point_seed(std::uint64_t base, std::uint64_t grid_index) {
  return splitmix64(splitmix64(base) ^ grid_index);
}

/// Child stream i of a parent seed: splitmix64(parent ^ splitmix64(i + 1)).
constexpr std::uint64_t run_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 1));
}

} // namespace dephasing
