#include <bit>

#include "kernel_math.hpp"
#include "netrelay/kernels.hpp"

namespace netrelay::kernels {
namespace {

using detail::ScalarOps;

void xor_words_impl(const std::uint64_t* a, const std::uint64_t* b,
                    std::uint64_t* out, std::size_t nwords) {
  for (std::size_t i = 0; i < nwords; ++i) out[i] = a[i] ^ b[i];
}

std::uint64_t popcount_words_impl(const std::uint64_t* w, std::size_t nwords) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < nwords; ++i)
    acc += static_cast<std::uint64_t>(std::popcount(w[i]));
  return acc;
}

void llr_from_bits_impl(const std::uint64_t* bits, std::size_t nbits,
                        double magnitude, double* out) {
  for (std::size_t i = 0; i < nbits; ++i) {
    bool one = (bits[i >> 6] >> (i & 63)) & 1ULL;
    out[i] = one ? -magnitude : magnitude;
  }
}

void clamp_abs_impl(double* x, std::size_t n, double limit) {
  for (std::size_t i = 0; i < n; ++i) x[i] = ScalarOps::clamp_abs(x[i], limit);
}

void tanh_half_impl(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = detail::tanh_half_core<ScalarOps>(in[i]);
}

void atanh2_clamped_impl(const double* in, double* out, std::size_t n,
                         double limit) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = detail::atanh2_core<ScalarOps>(in[i], limit);
}

void hard_decision_impl(const double* llr, std::size_t n,
                        std::uint64_t* bits) {
  std::size_t nwords = (n + 63) / 64;
  for (std::size_t w = 0; w < nwords; ++w) bits[w] = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (llr[i] < 0.0) bits[i >> 6] |= 1ULL << (i & 63);
}

const KernelTable kScalarTable = {
    "scalar",          xor_words_impl, popcount_words_impl,
    llr_from_bits_impl, clamp_abs_impl, tanh_half_impl,
    atanh2_clamped_impl, hard_decision_impl,
};

}  // namespace

const KernelTable& scalar() { return kScalarTable; }

}  // namespace netrelay::kernels
