#pragma once

#include <cstdint>
#include <string_view>

// Deterministic randomness for sampling mocks and simulation.
//
// Everything is built on SplitMix64 (Steele, Lea & Burton, "Fast splittable
// pseudorandom number generators"). Streams are derived by hashing string
// keys into the seed, and draws inside a stream are counter-indexed, so a
// cell's sequence never depends on how other cells are interleaved.

namespace biaslens::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child stream for a named substream. Chain calls for composite keys.
inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view key) {
  return mix64(seed + kGolden * fnv1a64(key));
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + kGolden * (index + 1));
}

// index-th value of a stream, order-independent.
inline std::uint64_t counter_u64(std::uint64_t stream, std::uint64_t index) {
  return mix64(stream + kGolden * (index + 1));
}

// 52 random bits into [0, 1).
inline double u64_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 12) * 0x1.0p-52;
}

inline double counter_uniform(std::uint64_t stream, std::uint64_t index) {
  return u64_to_unit(counter_u64(stream, index));
}

// Sequential SplitMix64 generator for shuffles and jitter.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  double next_unit() { return u64_to_unit(next()); }

  // Unbiased draw in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace biaslens::rng
