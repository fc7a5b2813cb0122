#include "netrelay/strategies.hpp"

#include <algorithm>

#include "netrelay/errors.hpp"
#include "netrelay/network.hpp"

namespace netrelay {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kIndependent: return "independent";
    case Strategy::kSerial: return "serial";
    case Strategy::kJoint: return "joint";
    case Strategy::kExtended: return "extended";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "independent") return Strategy::kIndependent;
  if (name == "serial") return Strategy::kSerial;
  if (name == "joint") return Strategy::kJoint;
  if (name == "extended") return Strategy::kExtended;
  throw ConfigError("unknown strategy: " + name);
}

std::vector<Strategy> all_strategies() {
  return {Strategy::kIndependent, Strategy::kSerial, Strategy::kJoint,
          Strategy::kExtended};
}

BitVector subvector(const BitVector& v, std::size_t offset,
                    std::size_t length) {
  if (offset + length > v.size())
    throw DimensionError("subvector range out of bounds");
  BitVector out(length);
  for (std::size_t i = 0; i < length; ++i)
    if (v.get(offset + i)) out.set(i, true);
  return out;
}

SparseGf2Matrix build_h_joint(const SparseGf2Matrix& ha,
                              const SparseGf2Matrix& hb) {
  if (ha.rows() != hb.rows() || ha.cols() != hb.cols())
    throw DimensionError("joint construction requires equal shapes");
  const std::size_t m = ha.rows(), n = ha.cols();
  SparseGf2Matrix out(2 * m, 2 * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::uint32_t c : ha.row(r)) out.insert(r, c);
  std::vector<std::uint32_t> merged;
  for (std::size_t r = 0; r < m; ++r) {
    merged.clear();
    std::set_symmetric_difference(ha.row(r).begin(), ha.row(r).end(),
                                  hb.row(r).begin(), hb.row(r).end(),
                                  std::back_inserter(merged));
    for (std::uint32_t c : merged) out.insert(m + r, c);
    for (std::uint32_t c : hb.row(r)) out.insert(m + r, n + c);
  }
  return out;
}

namespace {

SparseGf2Matrix build_extended_matrix(
    const std::vector<const SparseGf2Matrix*>& hs,
    const std::vector<std::vector<std::uint32_t>>& packets) {
  if (hs.empty()) throw DimensionError("extended graph needs at least one code");
  const std::size_t num_codes = hs.size();
  const std::size_t n = hs[0]->cols();
  std::size_t code_rows = 0;
  for (const SparseGf2Matrix* h : hs) {
    if (h == nullptr || h->cols() != n)
      throw DimensionError("extended graph codes must share block length");
    code_rows += h->rows();
  }
  for (const auto& packet : packets) {
    if (packet.size() < 2)
      throw ConfigError("combined packet must mix at least two codewords");
    if (!std::is_sorted(packet.begin(), packet.end()) ||
        std::adjacent_find(packet.begin(), packet.end()) != packet.end())
      throw ConfigError("packet sources must be sorted and unique");
    if (packet.back() >= num_codes)
      throw ConfigError("packet references unknown code");
  }

  SparseGf2Matrix out(code_rows + packets.size() * n,
                      (num_codes + packets.size()) * n);
  std::size_t row_offset = 0;
  for (std::size_t i = 0; i < num_codes; ++i) {
    for (std::size_t r = 0; r < hs[i]->rows(); ++r)
      for (std::uint32_t c : hs[i]->row(r)) out.insert(row_offset + r, i * n + c);
    row_offset += hs[i]->rows();
  }
  for (std::size_t j = 0; j < packets.size(); ++j)
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t row = row_offset + j * n + t;
      for (std::uint32_t src : packets[j]) out.insert(row, src * n + t);
      out.insert(row, (num_codes + j) * n + t);
    }
  return out;
}

}  // namespace

SparseGf2Matrix build_h_extn(const SparseGf2Matrix& ha,
                             const SparseGf2Matrix& hb) {
  if (ha.rows() != hb.rows() || ha.cols() != hb.cols())
    throw DimensionError("extended construction requires equal shapes");
  return build_extended_matrix({&ha, &hb}, {{0, 1}});
}

ExtendedGraph::ExtendedGraph(std::vector<const SparseGf2Matrix*> hs,
                             std::vector<std::vector<std::uint32_t>> packets)
    : n_(hs.empty() ? 0 : hs[0]->cols()),
      num_codes_(hs.size()),
      packets_(std::move(packets)),
      matrix_(build_extended_matrix(hs, packets_)),
      graph_(TannerGraph::from_matrix(matrix_)) {}

MultiSourceOutcome ExtendedGraph::decode(std::span<const PacketObservation> obs,
                                         unsigned max_iters) const {
  const std::size_t blocks = num_codes_ + packets_.size();
  LlrVector prior(blocks * n_, 0.0);
  std::vector<char> filled(blocks, 0);
  for (const PacketObservation& ob : obs) {
    if (ob.word.size() != n_)
      throw DimensionError("observation length does not match block length");
    std::size_t block;
    if (ob.sources.size() == 1) {
      if (ob.sources[0] >= num_codes_)
        throw ConfigError("observation references unknown code");
      block = ob.sources[0];
    } else {
      auto it = std::find(packets_.begin(), packets_.end(), ob.sources);
      if (it == packets_.end())
        throw ConfigError("observation does not match any combined packet");
      block = num_codes_ + static_cast<std::size_t>(it - packets_.begin());
    }
    if (filled[block]) throw ConfigError("block observed twice");
    filled[block] = 1;
    LlrVector llr = bsc_llr(ob.word, ob.crossover);
    std::copy(llr.begin(), llr.end(), prior.begin() + block * n_);
  }

  DecodeResult res = sum_product_decode(graph_, prior, max_iters);
  MultiSourceOutcome out;
  out.iterations = res.iterations_used;
  out.converged.assign(num_codes_, res.converged);
  out.codewords.reserve(num_codes_);
  for (std::size_t i = 0; i < num_codes_; ++i)
    out.codewords.push_back(subvector(res.hard_decision, i * n_, n_));
  return out;
}

MultiSourceOutcome decode_serial_multi(std::span<const LdpcCode* const> codes,
                                       std::span<const PacketObservation> obs,
                                       unsigned max_iters) {
  const std::size_t num_codes = codes.size();
  if (num_codes == 0) throw ConfigError("no codes given");
  const std::size_t n = codes[0]->n;
  for (const LdpcCode* c : codes)
    if (c == nullptr || c->n != n)
      throw DimensionError("codes must share block length");
  for (const PacketObservation& ob : obs) {
    if (ob.word.size() != n)
      throw DimensionError("observation length does not match block length");
    if (!std::is_sorted(ob.sources.begin(), ob.sources.end()) ||
        std::adjacent_find(ob.sources.begin(), ob.sources.end()) !=
            ob.sources.end() ||
        ob.sources.empty() || ob.sources.back() >= num_codes)
      throw ConfigError("observation sources must be sorted, unique, known");
  }

  MultiSourceOutcome out;
  out.codewords.assign(num_codes, BitVector(n));
  out.converged.assign(num_codes, false);
  std::vector<char> decoded(num_codes, 0);

  bool progress = true;
  while (progress) {
    progress = false;
    for (const PacketObservation& ob : obs) {
      std::uint32_t unknown = 0;
      std::size_t unknowns = 0;
      for (std::uint32_t s : ob.sources)
        if (!decoded[s]) {
          unknown = s;
          ++unknowns;
        }
      if (unknowns != 1) continue;
      BitVector word = ob.word;
      for (std::uint32_t s : ob.sources)
        if (s != unknown) word ^= out.codewords[s];
      DecodeResult res =
          sum_product_decode(codes[unknown]->graph,
                             bsc_llr(word, ob.crossover), max_iters);
      out.codewords[unknown] = std::move(res.hard_decision);
      out.converged[unknown] = res.converged;
      out.iterations += res.iterations_used;
      decoded[unknown] = 1;
      progress = true;
      break;
    }
  }
  return out;
}

DestinationDecoder::DestinationDecoder(const LdpcCode& code_a,
                                       const LdpcCode& code_b)
    : a_(&code_a),
      b_(&code_b),
      h_joint_(build_h_joint(code_a.h, code_b.h)),
      joint_graph_(TannerGraph::from_matrix(h_joint_)),
      extended_({&code_a.h, &code_b.h}, {{0, 1}}) {}

void DestinationDecoder::check_observation(
    const DestinationObservation& obs) const {
  if (obs.y_direct.size() != a_->n || obs.y_combined.size() != a_->n)
    throw ConfigError("observation length does not match block length");
}

StrategyOutcome DestinationDecoder::decode(Strategy s,
                                           const DestinationObservation& obs,
                                           unsigned max_iters) const {
  switch (s) {
    case Strategy::kIndependent: return independent(obs, max_iters);
    case Strategy::kSerial: return serial(obs, max_iters);
    case Strategy::kJoint: return joint(obs, max_iters);
    case Strategy::kExtended: return extended(obs, max_iters);
  }
  throw ConfigError("unknown strategy");
}

StrategyOutcome DestinationDecoder::independent(
    const DestinationObservation& obs, unsigned max_iters) const {
  check_observation(obs);
  DecodeResult res_a = sum_product_decode(
      a_->graph, bsc_llr(obs.y_direct, obs.p_direct), max_iters);
  BitVector y_b = obs.y_direct ^ obs.y_combined;
  double p_eff = bsc_convolve(obs.p_direct, obs.p_combined);
  DecodeResult res_b =
      sum_product_decode(b_->graph, bsc_llr(y_b, p_eff), max_iters);
  return {std::move(res_a.hard_decision), std::move(res_b.hard_decision),
          res_a.converged, res_b.converged,
          res_a.iterations_used + res_b.iterations_used};
}

StrategyOutcome DestinationDecoder::serial(const DestinationObservation& obs,
                                           unsigned max_iters) const {
  check_observation(obs);
  const LdpcCode* codes[2] = {a_, b_};
  PacketObservation packet_obs[2] = {
      {{0}, obs.y_direct, obs.p_direct},
      {{0, 1}, obs.y_combined, obs.p_combined}};
  MultiSourceOutcome multi = decode_serial_multi(codes, packet_obs, max_iters);
  return {std::move(multi.codewords[0]), std::move(multi.codewords[1]),
          multi.converged[0], multi.converged[1], multi.iterations};
}

StrategyOutcome DestinationDecoder::joint(const DestinationObservation& obs,
                                          unsigned max_iters) const {
  check_observation(obs);
  const std::size_t n = a_->n;
  LlrVector prior(2 * n);
  LlrVector direct = bsc_llr(obs.y_direct, obs.p_direct);
  LlrVector combined = bsc_llr(obs.y_combined, obs.p_combined);
  std::copy(direct.begin(), direct.end(), prior.begin());
  std::copy(combined.begin(), combined.end(), prior.begin() + n);
  DecodeResult res = sum_product_decode(joint_graph_, prior, max_iters);
  BitVector c_a = subvector(res.hard_decision, 0, n);
  BitVector c_ab = subvector(res.hard_decision, n, n);
  BitVector c_b = c_a ^ c_ab;
  return {std::move(c_a), std::move(c_b), res.converged, res.converged,
          res.iterations_used};
}

StrategyOutcome DestinationDecoder::extended(const DestinationObservation& obs,
                                             unsigned max_iters) const {
  check_observation(obs);
  PacketObservation packet_obs[2] = {
      {{0}, obs.y_direct, obs.p_direct},
      {{0, 1}, obs.y_combined, obs.p_combined}};
  MultiSourceOutcome multi = extended_.decode(packet_obs, max_iters);
  return {std::move(multi.codewords[0]), std::move(multi.codewords[1]),
          multi.converged[0], multi.converged[1], multi.iterations};
}

std::size_t DestinationDecoder::nnz_accounting(Strategy s) const {
  switch (s) {
    case Strategy::kIndependent:
    case Strategy::kSerial:
      return a_->h.nnz() + b_->h.nnz();
    case Strategy::kJoint:
      return h_joint_.nnz();
    case Strategy::kExtended:
      return extended_.matrix().nnz();
  }
  throw ConfigError("unknown strategy");
}

}  // namespace netrelay
