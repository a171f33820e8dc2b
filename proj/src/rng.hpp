#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace sdglens {

// std::shuffle and the std distributions are implementation-defined; these
// helpers keep seeded runs identical across standard libraries. The engine
// itself (mt19937_64) is fully specified.
using Engine = std::mt19937_64;

// Uniform integer in [0, bound) by rejection sampling.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t draw = 0;
  do {
    draw = engine();
  } while (draw >= limit);
  return draw % bound;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

template <typename T>
void fisher_yates(std::span<T> items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    std::swap(items[i - 1], items[j]);
  }
}

// 64-bit mixer used to derive independent sub-seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace sdglens
