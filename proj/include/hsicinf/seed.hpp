#pragma once

#include <cstdint>
#include <initializer_list>

namespace hsicinf {

/// splitmix64 finalizer. Used everywhere a derived seed is needed so that
/// parallel work items get decorrelated, reproducible streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combine a seed with one more value. Order-sensitive by design.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ splitmix64(value));
}

/// Fold a sequence of values into a base seed, left to right.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> values) {
  for (std::uint64_t v : values) seed = mix_seed(seed, v);
  return seed;
}

}  // namespace hsicinf
