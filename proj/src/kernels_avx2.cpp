// AVX2 + FMA backend. Compiled with -mavx2 -mfma on x86-64 only; selected at
// runtime by kernels::active() after a cpuid check. Each loop body mirrors
// the scalar sequence lane-for-lane, and remainder tails run the shared
// one-lane core, so outputs match the scalar backend bit-for-bit.

#include <immintrin.h>

#include <bit>

#include "kernel_math.hpp"
#include "netrelay/kernels.hpp"

namespace netrelay::kernels {
namespace {

using detail::ScalarOps;

struct AvxOps {
  using vec = __m256d;
  static vec set1(double v) { return _mm256_set1_pd(v); }
  static vec add(vec a, vec b) { return _mm256_add_pd(a, b); }
  static vec sub(vec a, vec b) { return _mm256_sub_pd(a, b); }
  static vec mul(vec a, vec b) { return _mm256_mul_pd(a, b); }
  static vec div(vec a, vec b) { return _mm256_div_pd(a, b); }
  static vec fma(vec a, vec b, vec c) { return _mm256_fmadd_pd(a, b, c); }
  static vec round_nearest(vec x) {
    return _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  }
  static vec pow2i(vec n) {
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
  }
  static void frexp_sqrt2(vec y, vec& m, vec& e) {
    __m256i b = _mm256_castpd_si256(y);
    __m256i ei = _mm256_sub_epi64(_mm256_srli_epi64(b, 52),
                                  _mm256_set1_epi64x(1023));
    __m256d mm = _mm256_castsi256_pd(_mm256_or_si256(
        _mm256_and_si256(b, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL)));
    __m256d gt = _mm256_cmp_pd(mm, _mm256_set1_pd(detail::kSqrt2), _CMP_GT_OQ);
    mm = _mm256_blendv_pd(mm, _mm256_mul_pd(mm, _mm256_set1_pd(0.5)), gt);
    ei = _mm256_add_epi64(
        ei, _mm256_and_si256(_mm256_castpd_si256(gt), _mm256_set1_epi64x(1)));
    // int64 -> double via the 2^52+2^51 magic constant (|ei| < 2^51).
    __m256i magic = _mm256_set1_epi64x(0x4338000000000000LL);
    __m256d ed = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(ei, magic)),
                               _mm256_set1_pd(6755399441055744.0));
    m = mm;
    e = ed;
  }
  static vec clamp_abs(vec x, double limit) {
    return _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-limit)),
                         _mm256_set1_pd(limit));
  }
};

void xor_words_impl(const std::uint64_t* a, const std::uint64_t* b,
                    std::uint64_t* out, std::size_t nwords) {
  std::size_t i = 0;
  for (; i + 4 <= nwords; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        _mm256_xor_si256(va, vb));
  }
  for (; i < nwords; ++i) out[i] = a[i] ^ b[i];
}

std::uint64_t popcount_words_impl(const std::uint64_t* w, std::size_t nwords) {
  // Nibble-LUT popcount with per-lane byte sums via SAD.
  const __m256i lut = _mm256_setr_epi8(
      0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
      0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= nwords; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + i));
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                                  _mm256_shuffle_epi8(lut, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < nwords; ++i)
    total += static_cast<std::uint64_t>(std::popcount(w[i]));
  return total;
}

void llr_from_bits_impl(const std::uint64_t* bits, std::size_t nbits,
                        double magnitude, double* out) {
  // 16-entry sign table: entry k has -0.0 in lane j iff bit j of k is set.
  static const auto kSigns = [] {
    struct Table {
      alignas(32) double rows[16][4];
    } t;
    for (int k = 0; k < 16; ++k)
      for (int j = 0; j < 4; ++j) t.rows[k][j] = (k >> j) & 1 ? -0.0 : 0.0;
    return t;
  }();
  const __m256d mag = _mm256_set1_pd(magnitude);
  std::size_t i = 0;
  for (; i + 4 <= nbits; i += 4) {
    std::uint64_t nib = (bits[i >> 6] >> (i & 63)) & 0xF;
    __m256d sign = _mm256_load_pd(kSigns.rows[nib]);
    _mm256_storeu_pd(out + i, _mm256_xor_pd(mag, sign));
  }
  for (; i < nbits; ++i) {
    bool one = (bits[i >> 6] >> (i & 63)) & 1ULL;
    out[i] = one ? -magnitude : magnitude;
  }
}

void clamp_abs_impl(double* x, std::size_t n, double limit) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, AvxOps::clamp_abs(_mm256_loadu_pd(x + i), limit));
  for (; i < n; ++i) x[i] = ScalarOps::clamp_abs(x[i], limit);
}

void tanh_half_impl(const double* in, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     detail::tanh_half_core<AvxOps>(_mm256_loadu_pd(in + i)));
  for (; i < n; ++i) out[i] = detail::tanh_half_core<ScalarOps>(in[i]);
}

void atanh2_clamped_impl(const double* in, double* out, std::size_t n,
                         double limit) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(
        out + i, detail::atanh2_core<AvxOps>(_mm256_loadu_pd(in + i), limit));
  for (; i < n; ++i) out[i] = detail::atanh2_core<ScalarOps>(in[i], limit);
}

void hard_decision_impl(const double* llr, std::size_t n,
                        std::uint64_t* bits) {
  std::size_t nwords = (n + 63) / 64;
  for (std::size_t w = 0; w < nwords; ++w) bits[w] = 0;
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(llr + i), zero, _CMP_LT_OQ);
    auto nib = static_cast<std::uint64_t>(_mm256_movemask_pd(cmp));
    bits[i >> 6] |= nib << (i & 63);
  }
  for (; i < n; ++i)
    if (llr[i] < 0.0) bits[i >> 6] |= 1ULL << (i & 63);
}

const KernelTable kAvx2Table = {
    "avx2",             xor_words_impl, popcount_words_impl,
    llr_from_bits_impl, clamp_abs_impl, tanh_half_impl,
    atanh2_clamped_impl, hard_decision_impl,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table_ref() { return kAvx2Table; }
}  // namespace detail

}  // namespace netrelay::kernels
