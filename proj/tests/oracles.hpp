#pragma once

// Independent oracles used by the unit and acceptance suites. Everything here
// deliberately avoids the library's own computation paths: ranks by span
// enumeration, ML decoding by codebook search, crossover composition by the
// closed forms, significance by exact binomial tails.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "netrelay/gf2.hpp"
#include "netrelay/ldpc.hpp"
#include "netrelay/rate_region.hpp"

namespace oracles {

// Rank over GF(2) as log2 of the row-span size, enumerated exhaustively.
// Only sensible for small matrices (m <= 16).
inline std::size_t brute_force_rank(const netrelay::SparseGf2Matrix& m) {
  std::set<std::string> span;
  const std::size_t rows = m.rows();
  for (std::uint64_t mask = 0; mask < (1ULL << rows); ++mask) {
    netrelay::BitVector acc(m.cols());
    for (std::size_t r = 0; r < rows; ++r)
      if ((mask >> r) & 1)
        for (std::uint32_t c : m.row(r)) acc.flip(c);
    span.insert(acc.to_string());
  }
  std::size_t rank = 0;
  while ((1ULL << rank) < span.size()) ++rank;
  return rank;
}

// 4-cycle count by direct column-pair intersection.
inline std::size_t count_4cycles_by_pairs(const netrelay::SparseGf2Matrix& m) {
  auto cols = m.column_supports();
  std::size_t total = 0;
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      std::size_t shared = 0;
      std::size_t a = 0, b = 0;
      while (a < cols[i].size() && b < cols[j].size()) {
        if (cols[i][a] == cols[j][b]) {
          ++shared;
          ++a;
          ++b;
        } else if (cols[i][a] < cols[j][b]) {
          ++a;
        } else {
          ++b;
        }
      }
      if (shared >= 2) total += shared * (shared - 1) / 2;
    }
  return total;
}

// Exhaustive minimum-Hamming-distance decoding over the full codebook.
inline netrelay::BitVector ml_decode(const netrelay::LdpcCode& code,
                                     const netrelay::BitVector& received) {
  netrelay::BitVector best;
  std::size_t best_dist = received.size() + 1;
  for (std::uint64_t msg = 0; msg < (1ULL << code.k); ++msg) {
    netrelay::BitVector u(code.k);
    for (std::size_t j = 0; j < code.k; ++j)
      if ((msg >> j) & 1) u.set(j, true);
    netrelay::BitVector c = netrelay::encode(code, u);
    std::size_t dist = (c ^ received).popcount();
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

// The eight-term expansion of the four-error crossover, straight off the sum
// over odd numbers of flips.
inline double p_double_prime_eight_term(const netrelay::LinkParams& lp) {
  double a = lp.p13, b = lp.p23, c = lp.p34, d = lp.p14;
  return a * (1 - b) * (1 - c) * (1 - d) + (1 - a) * b * (1 - c) * (1 - d) +
         (1 - a) * (1 - b) * c * (1 - d) + (1 - a) * (1 - b) * (1 - c) * d +
         (1 - a) * b * c * d + a * (1 - b) * c * d + a * b * (1 - c) * d +
         a * b * c * (1 - d);
}

// Crossover of k cascaded identical BSCs.
inline double cascade_closed_form(double p, unsigned k) {
  return (1.0 - std::pow(1.0 - 2.0 * p, static_cast<double>(k))) / 2.0;
}

// Exact binomial upper tail P(X >= k) for X ~ Bin(n, 1/2).
inline double binomial_tail_geq(std::uint64_t n, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
  double sum = 0.0;
  for (std::uint64_t i = k; i <= n; ++i)
    sum += std::exp(lg_n - std::lgamma(static_cast<double>(i) + 1.0) -
                    std::lgamma(static_cast<double>(n - i) + 1.0) -
                    static_cast<double>(n) * M_LN2);
  return std::min(sum, 1.0);
}

// One-sided paired sign test: p-value for the hypothesis that x tends to
// exceed y, given per-pair values.
inline double sign_test_p_value(const std::vector<std::uint32_t>& x,
                                const std::vector<std::uint32_t>& y) {
  std::uint64_t wins = 0, losses = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) ++wins;
    if (x[i] < y[i]) ++losses;
  }
  return binomial_tail_geq(wins + losses, wins);
}

// High-precision rate-region constants for all links at 0.05, frozen from a
// 50-digit evaluation of the closed forms.
namespace all05 {
inline constexpr double kC14 = 0.71360304288404387;
inline constexpr double kPPrime = 0.1355;
inline constexpr double kCPrime = 0.42766871226511514;
inline constexpr double kPDoublePrime = 0.17195;
inline constexpr double kCDoublePrime = 0.33785382772991120;
inline constexpr double kJointRaMax = 0.80341792741924780;
inline constexpr double kJointSum = 1.14127175514915901;
inline constexpr double kEntropy05 = 0.28639695711595613;
}  // namespace all05

// Standard (7,4) Hamming parity checks: column j is the binary expansion of
// j+1 over three rows.
inline netrelay::SparseGf2Matrix hamming74() {
  netrelay::SparseGf2Matrix h(3, 7);
  for (int col = 0; col < 7; ++col) {
    int value = col + 1;
    for (int row = 0; row < 3; ++row)
      if ((value >> row) & 1) h.insert(row, col);
  }
  return h;
}

// Vertex-edge incidence of K3,3: a (2,3)-regular 6x9 matrix whose Tanner
// graph has girth 8 and whose code (the cycle space, k=4, d_min=4) decodes
// every single flip exactly under flooding.
inline netrelay::SparseGf2Matrix k33_cycle_code() {
  netrelay::SparseGf2Matrix h(6, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      h.insert(i, 3 * i + j);
      h.insert(3 + j, 3 * i + j);
    }
  return h;
}

}  // namespace oracles
