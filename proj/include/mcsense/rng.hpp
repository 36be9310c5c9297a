#pragma once

#include <cstdint>
#include <random>

namespace mcsense {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for (seed, stream). Streams are keyed by
/// seed XOR stream id, then scrambled, so adding a stream never shifts
/// the draws of another.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ stream));
}

// Stream ids. Channel r uses kChannelStreamBase + r.
inline constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;
inline constexpr std::uint64_t kChannelStreamBase = 0x6368000000ULL;
inline constexpr std::uint64_t kPatternStream = 0x636f736574ULL;
inline constexpr std::uint64_t kActiveSetStream = 0x6163746976ULL;

}  // namespace mcsense
