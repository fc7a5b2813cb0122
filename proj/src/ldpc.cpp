#include "netrelay/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "netrelay/alist.hpp"
#include "netrelay/errors.hpp"
#include "netrelay/rng.hpp"

namespace netrelay {

namespace {
constexpr std::uint64_t kPurposeRegular = 0x7265672d6c647063ULL;
constexpr std::uint64_t kPurposeCorrelated = 0x636f72722d706172ULL;
}  // namespace

TannerGraph TannerGraph::from_matrix(const SparseGf2Matrix& h) {
  TannerGraph g;
  g.n_bits = h.cols();
  g.n_checks = h.rows();
  g.check_offsets.resize(g.n_checks + 1, 0);
  g.check_bits.reserve(h.nnz());
  for (std::size_t c = 0; c < g.n_checks; ++c) {
    for (std::uint32_t b : h.row(c)) g.check_bits.push_back(b);
    g.check_offsets[c + 1] = static_cast<std::uint32_t>(g.check_bits.size());
  }
  g.bit_offsets.assign(g.n_bits + 1, 0);
  for (std::uint32_t b : g.check_bits) ++g.bit_offsets[b + 1];
  for (std::size_t b = 0; b < g.n_bits; ++b)
    g.bit_offsets[b + 1] += g.bit_offsets[b];
  g.bit_edges.resize(g.check_bits.size());
  std::vector<std::uint32_t> cursor(g.bit_offsets.begin(),
                                    g.bit_offsets.end() - 1);
  for (std::uint32_t e = 0; e < g.check_bits.size(); ++e)
    g.bit_edges[cursor[g.check_bits[e]]++] = e;
  return g;
}

namespace {

bool syndrome_clean(const TannerGraph& g, const BitVector& hard) {
  auto hw = hard.words();
  for (std::size_t c = 0; c < g.n_checks; ++c) {
    unsigned parity = 0;
    for (std::uint32_t e = g.check_offsets[c]; e < g.check_offsets[c + 1]; ++e) {
      std::uint32_t b = g.check_bits[e];
      parity ^= static_cast<unsigned>((hw[b >> 6] >> (b & 63)) & 1ULL);
    }
    if (parity) return false;
  }
  return true;
}

}  // namespace

DecodeResult sum_product_decode(const TannerGraph& graph,
                                const LlrVector& prior, unsigned max_iters,
                                const kernels::KernelTable& kt) {
  if (prior.size() != graph.n_bits)
    throw DimensionError("prior length does not match bit-node count");
  if (max_iters < 1) throw ParameterError("max_iters must be >= 1");

  const std::size_t n_edges = graph.n_edges();
  std::vector<double> q(n_edges);   // bit-to-check
  std::vector<double> t(n_edges);   // tanh(q/2)
  std::vector<double> u(n_edges);   // exclusive tanh products per check
  std::vector<double> r(n_edges, 0.0);  // check-to-bit
  std::vector<double> posterior(prior);

  for (std::size_t b = 0; b < graph.n_bits; ++b)
    for (std::uint32_t i = graph.bit_offsets[b]; i < graph.bit_offsets[b + 1]; ++i)
      q[graph.bit_edges[i]] = prior[b];

  BitVector hard(graph.n_bits);
  auto decide = [&] {
    kt.hard_decision(posterior.data(), graph.n_bits, hard.words().data());
    return syndrome_clean(graph, hard);
  };

  if (decide()) return {std::move(hard), true, 0};

  for (unsigned it = 1; it <= max_iters; ++it) {
    kt.clamp_abs(q.data(), n_edges, kLlrClamp);
    kt.tanh_half(q.data(), t.data(), n_edges);

    // Exclusive products via prefix/suffix sweeps; no division, so zero
    // messages (erasures) cost nothing special.
    for (std::size_t c = 0; c < graph.n_checks; ++c) {
      const std::uint32_t lo = graph.check_offsets[c];
      const std::uint32_t hi = graph.check_offsets[c + 1];
      double acc = 1.0;
      for (std::uint32_t e = lo; e < hi; ++e) {
        u[e] = acc;
        acc *= t[e];
      }
      double suffix = 1.0;
      for (std::uint32_t e = hi; e-- > lo;) {
        u[e] *= suffix;
        suffix *= t[e];
      }
    }

    kt.atanh2_clamped(u.data(), r.data(), n_edges, kLlrClamp);

    // Bit update writes this iteration's totals and next iteration's
    // bit-to-check messages in one pass.
    for (std::size_t b = 0; b < graph.n_bits; ++b) {
      double total = prior[b];
      for (std::uint32_t i = graph.bit_offsets[b]; i < graph.bit_offsets[b + 1]; ++i)
        total += r[graph.bit_edges[i]];
      posterior[b] = total;
      for (std::uint32_t i = graph.bit_offsets[b]; i < graph.bit_offsets[b + 1]; ++i) {
        std::uint32_t e = graph.bit_edges[i];
        q[e] = total - r[e];
      }
    }

    if (decide()) return {std::move(hard), true, it};
  }
  return {std::move(hard), false, max_iters};
}

double bsc_llr_magnitude(double p) {
  if (!(p > 0.0 && p < 0.5))
    throw ParameterError("crossover probability must lie in (0, 0.5)");
  return std::log((1.0 - p) / p);
}

LlrVector bsc_llr(const BitVector& y, double p) {
  const double mag = bsc_llr_magnitude(p);
  LlrVector out(y.size());
  kernels::active().llr_from_bits(y.words().data(), y.size(), mag, out.data());
  return out;
}

LlrVector erased_llr(std::size_t n) {
  if (n < 1) throw ParameterError("erased_llr requires n >= 1");
  return LlrVector(n, 0.0);
}

std::size_t count_4cycles(const SparseGf2Matrix& h) {
  std::unordered_map<std::uint64_t, std::uint32_t> shared_rows;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    const auto& row = h.row(r);
    for (std::size_t i = 0; i < row.size(); ++i)
      for (std::size_t j = i + 1; j < row.size(); ++j)
        ++shared_rows[(static_cast<std::uint64_t>(row[i]) << 32) | row[j]];
  }
  std::size_t total = 0;
  for (const auto& [cols, cnt] : shared_rows)
    if (cnt >= 2) total += static_cast<std::size_t>(cnt) * (cnt - 1) / 2;
  return total;
}

LdpcCode make_code(SparseGf2Matrix h) {
  auto gen = derive_generator(h);
  LdpcCode code;
  code.n = h.cols();
  code.m = h.rows();
  code.k = gen.message_cols.size();
  code.message_cols = std::move(gen.message_cols);
  code.g = std::move(gen.generator);
  code.generator_rows.assign(code.k, BitVector(code.n));
  for (std::size_t j = 0; j < code.k; ++j)
    for (std::uint32_t c : code.g.row(j)) code.generator_rows[j].set(c, true);
  for (std::size_t j = 0; j < code.k; ++j)
    if (!mat_vec_mul(h, code.generator_rows[j]).all_zero())
      throw ConstructionError("generator row violates parity checks");
  code.graph = TannerGraph::from_matrix(h);
  code.h = std::move(h);
  return code;
}

SparseGf2Matrix construct_regular_matrix(std::size_t n, unsigned wc,
                                         unsigned wr, std::uint64_t seed) {
  if (wc < 2) throw ParameterError("column weight must be >= 2");
  if (wr == 0 || (n * wc) % wr != 0)
    throw ParameterError("n * wc must be divisible by wr");
  const std::size_t m = n * wc / wr;
  if (m < wc)
    throw ParameterError("fewer rows than the column weight requires");

  constexpr unsigned kMaxAttempts = 100;
  constexpr unsigned kColumnDraws = 100;

  for (unsigned attempt = 0; attempt < kMaxAttempts; ++attempt) {
    StreamRng rng(derive_stream(seed, kPurposeRegular, attempt, 0, 0));
    std::vector<std::uint32_t> sockets;
    sockets.reserve(n * wc);
    for (std::size_t row = 0; row < m; ++row)
      for (unsigned i = 0; i < wr; ++i)
        sockets.push_back(static_cast<std::uint32_t>(row));

    std::vector<std::vector<std::uint32_t>> col_rows(n);
    std::vector<std::vector<std::uint32_t>> cols_of_row(m);
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t epoch = 0;
    std::size_t avail = sockets.size();
    bool failed = false;

    for (std::size_t col = 0; col < n && !failed; ++col) {
      bool placed = false;
      for (unsigned draw = 0; draw < kColumnDraws && !placed; ++draw) {
        for (unsigned t = 1; t <= wc; ++t) {
          std::size_t j = rng.next_below(avail - (t - 1));
          std::swap(sockets[j], sockets[avail - t]);
        }
        const std::uint32_t* cand = sockets.data() + (avail - wc);
        bool ok = true;
        for (unsigned i = 0; i < wc && ok; ++i)
          for (unsigned j = i + 1; j < wc; ++j)
            if (cand[i] == cand[j]) {
              ok = false;
              break;
            }
        if (ok) {
          // Reject the column if it would share two rows with any earlier
          // column; a second hit on the same column means a 4-cycle.
          ++epoch;
          for (unsigned i = 0; i < wc && ok; ++i)
            for (std::uint32_t other : cols_of_row[cand[i]]) {
              if (stamp[other] == epoch) {
                ok = false;
                break;
              }
              stamp[other] = epoch;
            }
        }
        if (ok) {
          auto& rows = col_rows[col];
          rows.assign(cand, cand + wc);
          std::sort(rows.begin(), rows.end());
          for (std::uint32_t rr : rows)
            cols_of_row[rr].push_back(static_cast<std::uint32_t>(col));
          avail -= wc;
          placed = true;
        }
      }
      if (!placed) failed = true;
    }

    if (!failed) {
      SparseGf2Matrix h(m, n);
      for (std::size_t col = 0; col < n; ++col)
        for (std::uint32_t row : col_rows[col]) h.insert(row, col);
      return h;
    }
  }
  throw ConstructionError("regular matrix construction failed after " +
                          std::to_string(kMaxAttempts) + " attempts");
}

LdpcCode construct_regular(std::size_t n, unsigned wc, unsigned wr,
                           std::uint64_t seed) {
  return make_code(construct_regular_matrix(n, wc, wr, seed));
}

SparseGf2Matrix construct_correlated_pair(const SparseGf2Matrix& h1,
                                          std::uint64_t seed) {
  auto cols = h1.column_supports();
  if (cols.empty()) throw ParameterError("empty matrix");
  const std::size_t wc = cols[0].size();
  if (wc < 2) throw ParameterError("column weight must be >= 2");
  for (const auto& s : cols)
    if (s.size() != wc)
      throw ParameterError("matrix must have uniform column weight");
  const std::size_t m = h1.rows();
  if (m <= wc)
    throw ConstructionError("no replacement row outside the column support");

  StreamRng rng(derive_stream(seed, kPurposeCorrelated, 0, 0, 0));
  SparseGf2Matrix h2(m, h1.cols());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto& s = cols[i];
    std::size_t drop = rng.next_below(wc);
    std::uint64_t repl = rng.next_below(m - wc);
    for (std::uint32_t v : s)
      if (repl >= v) ++repl;  // skip rows already in the support
    for (std::size_t j = 0; j < wc; ++j)
      if (j != drop) h2.insert(s[j], i);
    h2.insert(repl, i);
  }
  return h2;
}

BitVector encode(const LdpcCode& code, const BitVector& u) {
  if (u.size() != code.k)
    throw DimensionError("message length does not match code dimension");
  BitVector c(code.n);
  for (std::size_t j = 0; j < code.k; ++j)
    if (u.get(j)) c ^= code.generator_rows[j];
  return c;
}

BitVector extract_message(const LdpcCode& code, const BitVector& c) {
  if (c.size() != code.n)
    throw DimensionError("codeword length does not match block length");
  BitVector u(code.k);
  for (std::size_t j = 0; j < code.k; ++j)
    if (c.get(code.message_cols[j])) u.set(j, true);
  return u;
}

void save_code(const LdpcCode& code, unsigned wc, unsigned wr,
               std::uint64_t seed, const std::string& path) {
  write_alist_file(code.h, path);
  std::ofstream meta(path + ".meta", std::ios::binary);
  if (!meta) throw ConfigError("cannot open for writing: " + path + ".meta");
  meta << "n=" << code.n << " k=" << code.k << " wc=" << wc << " wr=" << wr
       << " seed=" << seed << "\n";
}

LdpcCode load_code(const std::string& path) {
  return make_code(read_alist_file(path));
}

}  // namespace netrelay
