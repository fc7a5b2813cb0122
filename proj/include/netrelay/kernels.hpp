#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace netrelay::kernels {

// Elementwise and bitwise primitives behind the decoder and channel hot
// loops. Every backend implements the same operation sequence (same fma
// placement, same clamping order), so outputs are bit-identical across
// backends and a run's results do not depend on which one was dispatched.
// Equivalence is enforced by tests/test_kernels.cpp.
struct KernelTable {
  const char* name;

  // out[i] = a[i] ^ b[i]
  void (*xor_words)(const std::uint64_t* a, const std::uint64_t* b,
                    std::uint64_t* out, std::size_t nwords);

  std::uint64_t (*popcount_words)(const std::uint64_t* w, std::size_t nwords);

  // out[i] = packed bit i set ? -magnitude : +magnitude
  void (*llr_from_bits)(const std::uint64_t* bits, std::size_t nbits,
                        double magnitude, double* out);

  // x[i] = clamp(x[i], -limit, +limit)
  void (*clamp_abs)(double* x, std::size_t n, double limit);

  // out[i] = tanh(in[i] / 2), computed as 1 - 2/(exp(in[i]) + 1)
  void (*tanh_half)(const double* in, double* out, std::size_t n);

  // out[i] = clamp(2 * atanh(in[i]), -limit, +limit); requires |in[i]| < 1
  void (*atanh2_clamped)(const double* in, double* out, std::size_t n,
                         double limit);

  // packed bit i = (llr[i] < 0); trailing bits of the last word are zeroed
  void (*hard_decision)(const double* llr, std::size_t n, std::uint64_t* bits);
};

const KernelTable& scalar();

// nullptr when the CPU (or the build) lacks AVX2+FMA.
const KernelTable* avx2();

// Backend chosen once at startup: AVX2 when available, else scalar.
// NETRELAY_SIMD={auto,scalar,avx2} overrides; unknown values fall back to auto.
const KernelTable& active();

}  // namespace netrelay::kernels
