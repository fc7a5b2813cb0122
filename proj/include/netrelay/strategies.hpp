#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netrelay/ldpc.hpp"

namespace netrelay {

enum class Strategy { kIndependent, kSerial, kJoint, kExtended };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);
std::vector<Strategy> all_strategies();

// What a two-source destination sees: a noisy copy of codeword A and a noisy
// copy of A xor B, with the marginal effective crossover of each path.
struct DestinationObservation {
  BitVector y_direct;
  BitVector y_combined;
  double p_direct = 0.0;
  double p_combined = 0.0;
};

struct StrategyOutcome {
  BitVector c_hat_a;
  BitVector c_hat_b;
  bool converged_a = false;
  bool converged_b = false;
  unsigned iterations = 0;  // summed over all constituent decodes
};

// [[HA, 0], [HA^HB, HB]] over the stacked word [c_A, c_A^c_B]. Kept exactly
// in block form, never row-reduced, even when rank-deficient.
SparseGf2Matrix build_h_joint(const SparseGf2Matrix& ha,
                              const SparseGf2Matrix& hb);

// [[HA, 0, 0], [0, HB, 0], [I, I, I]] over [c_A, c_B, c_A^c_B]; 4-cycle-free
// whenever HA and HB are.
SparseGf2Matrix build_h_extn(const SparseGf2Matrix& ha,
                             const SparseGf2Matrix& hb);

// A received packet described as an XOR of source codewords. sources must be
// sorted and unique; a single-element set is a direct observation.
struct PacketObservation {
  std::vector<std::uint32_t> sources;
  BitVector word;
  double crossover = 0.0;
};

struct MultiSourceOutcome {
  std::vector<BitVector> codewords;  // one per source code
  std::vector<bool> converged;
  unsigned iterations = 0;
};

// Peeling schedule: repeatedly take the first observation whose source set
// has exactly one not-yet-decoded codeword, strip the decoded ones off by
// XOR, and channel-decode the remainder. Decoded words are used even when
// their decode did not converge (the flag records it). Codewords that no
// schedule step can isolate come back all-zero with converged=false.
MultiSourceOutcome decode_serial_multi(std::span<const LdpcCode* const> codes,
                                       std::span<const PacketObservation> obs,
                                       unsigned max_iters);

// One Tanner graph spanning every codeword block plus one block per combined
// packet, with n parity checks tying each packet block to its constituents.
// Observed blocks get channel LLRs, everything else an erasure prior, and a
// single sum-product pass fills in all blocks at once.
class ExtendedGraph {
 public:
  ExtendedGraph(std::vector<const SparseGf2Matrix*> hs,
                std::vector<std::vector<std::uint32_t>> packets);

  const SparseGf2Matrix& matrix() const { return matrix_; }
  const TannerGraph& graph() const { return graph_; }
  std::size_t block_length() const { return n_; }

  MultiSourceOutcome decode(std::span<const PacketObservation> obs,
                            unsigned max_iters) const;

 private:
  std::size_t n_ = 0;
  std::size_t num_codes_ = 0;
  std::vector<std::vector<std::uint32_t>> packets_;
  SparseGf2Matrix matrix_;
  TannerGraph graph_;
};

// The four destination decoding strategies over a fixed code pair, with the
// joint and extended graphs cached up front so concurrent frame decoding
// never mutates shared state. The referenced codes must outlive this object.
class DestinationDecoder {
 public:
  DestinationDecoder(const LdpcCode& code_a, const LdpcCode& code_b);

  StrategyOutcome decode(Strategy s, const DestinationObservation& obs,
                         unsigned max_iters) const;

  // Network-then-channel: decode y_direct with A's graph, and the XOR of the
  // two received words with B's graph at the convolved crossover. The direct
  // path's noise rides into B's word.
  StrategyOutcome independent(const DestinationObservation& obs,
                              unsigned max_iters) const;

  // Decode A first, reconstruct its codeword, strip it from y_combined, and
  // decode B at the combined path's own crossover.
  StrategyOutcome serial(const DestinationObservation& obs,
                         unsigned max_iters) const;

  // One decode over the joint graph; c_hat_b = c_hat_a ^ c_hat_ab.
  StrategyOutcome joint(const DestinationObservation& obs,
                        unsigned max_iters) const;

  // One decode over the extended graph; both codewords read off directly.
  StrategyOutcome extended(const DestinationObservation& obs,
                           unsigned max_iters) const;

  // Non-zero parity-check entries the strategy's decoder(s) touch.
  std::size_t nnz_accounting(Strategy s) const;

  const SparseGf2Matrix& h_joint() const { return h_joint_; }
  const SparseGf2Matrix& h_extn() const { return extended_.matrix(); }

 private:
  void check_observation(const DestinationObservation& obs) const;

  const LdpcCode* a_;
  const LdpcCode* b_;
  SparseGf2Matrix h_joint_;
  TannerGraph joint_graph_;
  ExtendedGraph extended_;
};

// bits [offset, offset+length) of v.
BitVector subvector(const BitVector& v, std::size_t offset,
                    std::size_t length);

}  // namespace netrelay
