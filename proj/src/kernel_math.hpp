#pragma once

// Operation sequences shared by the kernel backends. Each backend
// instantiates these templates with its own lane abstraction; keeping a
// single sequence (same fma placement, same reduction constants) is what
// makes scalar and SIMD outputs bit-identical. All building blocks are
// correctly rounded IEEE-754 ops, so lane width cannot change results.
//
// Input domains are the decoder's: |x| <= ~700 for exp_core (the decoder
// clamps messages to +/-30 long before that), |t| < 1 for atanh2_core.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace netrelay::kernels::detail {

inline constexpr double kLog2E = 1.44269504088896340736;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// exp(r) Taylor coefficients 1/k!, consumed high-order-first by Horner.
// |r| <= ln2/2 after range reduction; the k=13 truncation error is ~4e-18.
inline constexpr double kExpCoeff[] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
    1.0,                1.0};

// atanh(z) odd-series coefficients on z^2 (1/19 .. 1/3); the leading 1 is
// applied by the caller. |z| <= 0.1716 after mantissa reduction.
inline constexpr double kLogCoeff[] = {1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0,
                                       1.0 / 13.0, 1.0 / 11.0, 1.0 / 9.0,
                                       1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0};

template <class O>
inline typename O::vec exp_core(typename O::vec x) {
  using v = typename O::vec;
  v fx = O::round_nearest(O::mul(x, O::set1(kLog2E)));
  v r = O::fma(fx, O::set1(-kLn2Hi), x);
  r = O::fma(fx, O::set1(-kLn2Lo), r);
  v p = O::set1(kExpCoeff[0]);
  for (std::size_t i = 1; i < sizeof(kExpCoeff) / sizeof(double); ++i)
    p = O::fma(p, r, O::set1(kExpCoeff[i]));
  return O::mul(p, O::pow2i(fx));
}

// tanh(x/2) = 1 - 2/(exp(x) + 1). The subtraction is exact by Sterbenz, so
// accuracy is limited only by exp_core and one division.
template <class O>
inline typename O::vec tanh_half_core(typename O::vec x) {
  using v = typename O::vec;
  v e = exp_core<O>(x);
  v t = O::div(O::set1(2.0), O::add(e, O::set1(1.0)));
  return O::sub(O::set1(1.0), t);
}

template <class O>
inline typename O::vec log_core(typename O::vec y) {
  using v = typename O::vec;
  v m, e;
  O::frexp_sqrt2(y, m, e);
  v z = O::div(O::sub(m, O::set1(1.0)), O::add(m, O::set1(1.0)));
  v w = O::mul(z, z);
  v p = O::set1(kLogCoeff[0]);
  for (std::size_t i = 1; i < sizeof(kLogCoeff) / sizeof(double); ++i)
    p = O::fma(p, w, O::set1(kLogCoeff[i]));
  p = O::fma(p, w, O::set1(1.0));
  v s = O::mul(z, p);
  s = O::add(s, s);
  v r = O::fma(e, O::set1(kLn2Lo), s);
  return O::fma(e, O::set1(kLn2Hi), r);
}

// 2*atanh(t) = log((1+t)/(1-t)), clamped to [-limit, limit]. |t| < 1.
template <class O>
inline typename O::vec atanh2_core(typename O::vec t, double limit) {
  using v = typename O::vec;
  v y = O::div(O::add(O::set1(1.0), t), O::sub(O::set1(1.0), t));
  return O::clamp_abs(log_core<O>(y), limit);
}

// One-lane backend. Also used for SIMD remainder tails, which keeps the
// tail path on the same sequence as the scalar backend.
struct ScalarOps {
  using vec = double;
  static double set1(double v) { return v; }
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) { return a / b; }
  static double fma(double a, double b, double c) { return std::fma(a, b, c); }
  static double round_nearest(double x) { return std::nearbyint(x); }
  static double pow2i(double n) {
    auto bits = static_cast<std::uint64_t>(static_cast<std::int64_t>(n) + 1023)
                << 52;
    return std::bit_cast<double>(bits);
  }
  static void frexp_sqrt2(double y, double& m, double& e) {
    std::uint64_t b = std::bit_cast<std::uint64_t>(y);
    std::int64_t ei = static_cast<std::int64_t>(b >> 52) - 1023;
    double mm = std::bit_cast<double>((b & 0x000FFFFFFFFFFFFFULL) |
                                      0x3FF0000000000000ULL);
    if (mm > kSqrt2) {
      mm *= 0.5;
      ei += 1;
    }
    m = mm;
    e = static_cast<double>(ei);
  }
  static double clamp_abs(double x, double limit) {
    double t = x < -limit ? -limit : x;
    return t > limit ? limit : t;
  }
};

}  // namespace netrelay::kernels::detail
