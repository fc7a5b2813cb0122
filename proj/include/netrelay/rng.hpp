#pragma once

#include <cstdint>

namespace netrelay {

// SplitMix64 finalizer. Used both as a hash for deriving stream states and as
// the generator's output function, so every stream is a pure function of its
// 64-bit state and results are identical across platforms and compilers.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based SplitMix64 stream. Intentionally not std::mt19937 + library
// distributions: those are implementation-defined, and reproducibility across
// toolchains is part of the contract here.
class StreamRng {
 public:
  explicit constexpr StreamRng(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Unbiased integer in [0, bound) via masked rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = ~0ULL >> __builtin_clzll((bound - 1) | 1);
    for (;;) {
      std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

 private:
  std::uint64_t state_;
};

// Derives the state of a named substream by folding each component through
// the finalizer. Streams keyed by distinct tuples never share state chains.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t purpose,
                                      std::uint64_t a, std::uint64_t b,
                                      std::uint64_t trial) {
  std::uint64_t s = mix64(seed ^ 0x243F6A8885A308D3ULL);
  s = mix64(s ^ purpose);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  s = mix64(s ^ trial);
  return s;
}

}  // namespace netrelay
