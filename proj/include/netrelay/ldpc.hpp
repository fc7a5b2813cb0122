#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrelay/gf2.hpp"
#include "netrelay/kernels.hpp"

namespace netrelay {

// One LLR per bit node; positive favors bit 0, zero is a full erasure.
using LlrVector = std::vector<double>;

// Message magnitudes are capped here to keep the tanh-product check update
// finite; 2*atanh(tanh(15)) == 30 is far beyond any useful certainty.
inline constexpr double kLlrClamp = 30.0;

struct TannerGraph {
  std::size_t n_bits = 0;
  std::size_t n_checks = 0;
  // Check-major CSR; edge e belongs to check c when
  // check_offsets[c] <= e < check_offsets[c+1], and touches bit check_bits[e].
  std::vector<std::uint32_t> check_offsets;
  std::vector<std::uint32_t> check_bits;
  // Bit-major view listing edge ids per bit.
  std::vector<std::uint32_t> bit_offsets;
  std::vector<std::uint32_t> bit_edges;

  std::size_t n_edges() const { return check_bits.size(); }
  static TannerGraph from_matrix(const SparseGf2Matrix& h);
};

struct DecodeResult {
  BitVector hard_decision;
  bool converged = false;      // true iff the final hard decision satisfies H
  unsigned iterations_used = 0;
};

// Flooding-schedule sum-product decoding with the exact tanh product rule.
// The syndrome is evaluated on the a-posteriori hard decision before the
// first iteration and after every iteration; a word that already satisfies
// all checks reports iterations_used == 0. Ties (total LLR exactly 0)
// decide bit 0. Non-convergence is a result state, not an error.
DecodeResult sum_product_decode(
    const TannerGraph& graph, const LlrVector& prior, unsigned max_iters,
    const kernels::KernelTable& kt = kernels::active());

double bsc_llr_magnitude(double p);  // ln((1-p)/p), requires 0 < p < 0.5
LlrVector bsc_llr(const BitVector& y, double p);
LlrVector erased_llr(std::size_t n);  // all-zero prior, p(1) = p(0) = 1/2

// Sum over column pairs of C(shared_rows, 2).
std::size_t count_4cycles(const SparseGf2Matrix& h);

struct LdpcCode {
  SparseGf2Matrix h;
  SparseGf2Matrix g;
  std::vector<std::uint32_t> message_cols;  // codeword position of message bit j
  std::size_t n = 0;  // block length
  std::size_t k = 0;  // dimension, n - rank_2(h)
  std::size_t m = 0;  // rows of h
  std::vector<BitVector> generator_rows;  // packed rows of g, for encoding
  TannerGraph graph;
};

// Derives the generator and graph for an arbitrary parity-check matrix.
LdpcCode make_code(SparseGf2Matrix h);

// Random (wc, wr)-regular parity-check matrix with girth >= 6, built by
// socket sampling with per-column redraws and whole-restart on failure.
// Deterministic in (n, wc, wr, seed). Throws ConstructionError with the
// attempt count when the budget is exhausted.
SparseGf2Matrix construct_regular_matrix(std::size_t n, unsigned wc,
                                         unsigned wr, std::uint64_t seed);
LdpcCode construct_regular(std::size_t n, unsigned wc, unsigned wr,
                           std::uint64_t seed);

// Second matrix of a correlated pair: column i keeps all but one entry of
// h1's column i and replaces the dropped row with one outside the support,
// so h1 xor h2 has column weight exactly 2.
SparseGf2Matrix construct_correlated_pair(const SparseGf2Matrix& h1,
                                          std::uint64_t seed);

BitVector encode(const LdpcCode& code, const BitVector& u);
BitVector extract_message(const LdpcCode& code, const BitVector& c);

// alist file plus a one-line ".meta" sidecar recording (n, k, wc, wr, seed).
void save_code(const LdpcCode& code, unsigned wc, unsigned wr,
               std::uint64_t seed, const std::string& path);
LdpcCode load_code(const std::string& path);

}  // namespace netrelay
