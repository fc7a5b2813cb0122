// Self-checks behind the `verify` CLI subcommand: quick randomized suites
// over the algebraic identities and determinism contracts.

#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "netrelay/alist.hpp"
#include "netrelay/errors.hpp"
#include "netrelay/harness.hpp"
#include "netrelay/rng.hpp"

namespace netrelay {

namespace {

// Direct expansion of the four-error-term crossover, kept independent of
// p_double_prime's convolution form on purpose.
double p_double_prime_expanded(const LinkParams& lp) {
  double a = lp.p13, b = lp.p23, c = lp.p34, d = lp.p14;
  return a * (1 - b) * (1 - c) * (1 - d) + (1 - a) * b * (1 - c) * (1 - d) +
         (1 - a) * (1 - b) * c * (1 - d) + (1 - a) * (1 - b) * (1 - c) * d +
         (1 - a) * b * c * d + a * (1 - b) * c * d + a * b * (1 - c) * d +
         a * b * c * (1 - d);
}

// K3,3 vertex-edge incidence: a girth-8 Tanner graph whose cycle-space code
// (k=4, d_min=4) decodes every single flip exactly under flooding.
SparseGf2Matrix k33_cycle_code() {
  SparseGf2Matrix h(6, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      h.insert(i, 3 * i + j);
      h.insert(3 + j, 3 * i + j);
    }
  return h;
}

// Exhaustive minimum-distance decoding over all 2^k codewords.
BitVector ml_decode(const LdpcCode& code, const BitVector& received) {
  BitVector best;
  std::size_t best_dist = received.size() + 1;
  for (std::uint64_t msg = 0; msg < (1ULL << code.k); ++msg) {
    BitVector u(code.k);
    for (std::size_t j = 0; j < code.k; ++j)
      if ((msg >> j) & 1) u.set(j, true);
    BitVector c = encode(code, u);
    std::size_t dist = (c ^ received).popcount();
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

struct Checker {
  std::ostream& log;
  bool all_ok = true;
  void report(const std::string& name, bool ok, const std::string& detail = "") {
    log << (ok ? "ok   " : "FAIL ") << name;
    if (!ok && !detail.empty()) log << " (" << detail << ")";
    log << "\n";
    all_ok = all_ok && ok;
  }
};

}  // namespace

bool run_verification(std::ostream& log) {
  Checker check{log};

  {
    LinkParams lp{0.05, 0.05, 0.05, 0.05};
    bool ok = std::fabs(p_prime(lp) - 0.1355) < 1e-12 &&
              std::fabs(p_double_prime(lp) - 0.17195) < 1e-12 &&
              std::fabs(bsc_capacity(0.05) - 0.713603042884044) < 1e-9;
    check.report("rate-region closed forms at all-0.05", ok);
  }

  {
    StreamRng rng(derive_stream(11, 0x766572ULL, 0, 0, 0));
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 10000 && ok; ++i) {
      LinkParams lp{rng.next_unit() * 0.5, rng.next_unit() * 0.5,
                    rng.next_unit() * 0.5, rng.next_unit() * 0.5};
      auto report = verify_subset_chain(lp);
      if (!report.pass) {
        ok = false;
        detail = report.detail;
      }
      if (std::fabs(p_double_prime(lp) - p_double_prime_expanded(lp)) > 1e-12) {
        ok = false;
        detail = "eight-term expansion disagrees";
      }
    }
    check.report("region chain + crossover identities, 10^4 draws", ok, detail);
  }

  {
    auto h = construct_regular_matrix(96, 3, 6, 21);
    std::ostringstream buf;
    write_alist(h, buf);
    std::istringstream in(buf.str());
    bool ok = read_alist(in) == h && count_4cycles(h) == 0;
    check.report("alist round-trip and girth of a (3,6) matrix", ok);
  }

  {
    auto code = construct_regular(96, 3, 6, 22);
    bool ok = code.k == 48;
    SeededRng rng{7};
    for (std::uint64_t t = 0; t < 50 && ok; ++t) {
      BitVector u = random_message(code.k, rng, 0, t);
      ok = mat_vec_mul(code.h, encode(code, u)).all_zero();
    }
    check.report("encoder lands in the null space of H", ok);
  }

  {
    auto code_a = construct_regular(96, 3, 6, 23);
    auto code_b = construct_regular(96, 3, 6, 24);
    DestinationDecoder dec(code_a, code_b);
    bool ok = dec.nnz_accounting(Strategy::kIndependent) == 6 * 96 &&
              dec.nnz_accounting(Strategy::kExtended) == 9 * 96 &&
              dec.nnz_accounting(Strategy::kJoint) >= 6 * 96 &&
              dec.nnz_accounting(Strategy::kJoint) <= 12 * 96 &&
              count_4cycles(dec.h_extn()) == 0;
    SeededRng rng{8};
    for (std::uint64_t t = 0; t < 100 && ok; ++t) {
      BitVector ca = encode(code_a, random_message(code_a.k, rng, 0, t));
      BitVector cb = encode(code_b, random_message(code_b.k, rng, 1, t));
      BitVector cab = ca ^ cb;
      BitVector joint_word(2 * 96), extn_word(3 * 96);
      for (std::size_t i = 0; i < 96; ++i) {
        joint_word.set(i, ca.get(i));
        joint_word.set(96 + i, cab.get(i));
        extn_word.set(i, ca.get(i));
        extn_word.set(96 + i, cb.get(i));
        extn_word.set(192 + i, cab.get(i));
      }
      ok = mat_vec_mul(dec.h_joint(), joint_word).all_zero() &&
           mat_vec_mul(dec.h_extn(), extn_word).all_zero();
    }
    check.report("joint/extended block matrices annihilate codeword stacks", ok);
  }

  {
    auto code = make_code(k33_cycle_code());
    bool ok = code.k == 4;
    for (std::uint64_t msg = 0; msg < 16 && ok; ++msg) {
      BitVector u(4);
      for (std::size_t j = 0; j < 4; ++j)
        if ((msg >> j) & 1) u.set(j, true);
      BitVector c = encode(code, u);
      for (std::size_t flip = 0; flip <= 9 && ok; ++flip) {
        BitVector y = c;
        if (flip > 0) y.flip(flip - 1);
        auto res = sum_product_decode(code.graph, bsc_llr(y, 0.05), 20);
        ok = res.converged && res.hard_decision == ml_decode(code, y);
      }
    }
    check.report("sum-product matches exhaustive ML within one flip", ok);
  }

  {
    NetworkTopology topo = butterfly(0.03, 3.0);
    SeededRng rng{9};
    BitVector words[2] = {random_message(500, rng, 0, 0),
                          random_message(500, rng, 1, 0)};
    auto inputs = assign_source_words(topo, words);
    Transcript t1 = simulate(topo, inputs, rng, 5);
    Transcript t2 = simulate(topo, inputs, rng, 5);
    bool ok = t1 == t2;
    for (std::size_t li = 0; li < topo.links().size() && ok; ++li)
      ok = t1.record(li).y == (t1.record(li).x ^ t1.record(li).e);
    // The relayed word equals c_A ^ c_B xor every error picked up upstream.
    BitVector expect = words[0] ^ words[1];
    for (LinkId l : topo.composition({5, 6}).error_links)
      expect ^= transcript_for(t1, topo, l).e;
    ok = ok && expect == transcript_for(t1, topo, {5, 6}).y;
    check.report("transcript consistency and determinism", ok);
  }

  {
    ExperimentConfig cfg;
    cfg.network = "butterfly";
    cfg.p_values = {0.03};
    cfg.n = 48;
    cfg.min_bit_errors = 1;
    cfg.max_frames = 64;
    cfg.master_seed = 33;
    std::string a = ber_csv_string(run_ber_sweep(cfg));
    std::string b = ber_csv_string(run_ber_sweep(cfg));
    auto region_a = run_region_report({0.05, 0.05, 0.05, 0.05}, 40);
    auto region_b = run_region_report({0.05, 0.05, 0.05, 0.05}, 40);
    bool ok = a == b && region_a.csv == region_b.csv && region_a.chain.pass;
    check.report("CSV determinism across repeated runs", ok);
  }

  return check.all_ok;
}

}  // namespace netrelay
