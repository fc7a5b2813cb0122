#include "netrelay/network.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "netrelay/errors.hpp"
#include "netrelay/rng.hpp"

namespace netrelay {

namespace {
constexpr std::uint64_t kPurposeLinkNoise = 0x6c696e6b2d657272ULL;
constexpr std::uint64_t kPurposeMessage = 0x6d73672d62697473ULL;

std::uint64_t link_key(LinkId id) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(id.from)) << 32) |
         static_cast<std::uint32_t>(id.to);
}

std::string link_name(LinkId id) {
  return std::to_string(id.from) + "->" + std::to_string(id.to);
}
}  // namespace

const char* to_string(NodeRole role) {
  switch (role) {
    case NodeRole::kSource: return "source";
    case NodeRole::kForward: return "forward";
    case NodeRole::kXor: return "xor";
    case NodeRole::kDestination: return "destination";
  }
  return "?";
}

NodeRole node_role_from_string(const std::string& s) {
  if (s == "source") return NodeRole::kSource;
  if (s == "forward") return NodeRole::kForward;
  if (s == "xor") return NodeRole::kXor;
  if (s == "destination") return NodeRole::kDestination;
  throw ConfigError("unknown node role: " + s);
}

NetworkTopology::NetworkTopology(std::vector<Node> nodes,
                                 std::vector<Link> links,
                                 std::vector<SourceAssignment> source_assignments,
                                 std::vector<DestinationTaps> destination_taps)
    : nodes_(std::move(nodes)),
      links_(std::move(links)),
      source_assignments_(std::move(source_assignments)),
      destination_taps_(std::move(destination_taps)) {
  std::map<int, NodeRole> role;
  for (const auto& n : nodes_)
    if (!role.emplace(n.id, n.role).second)
      throw ConfigError("duplicate node id " + std::to_string(n.id));

  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (!role.contains(l.id.from) || !role.contains(l.id.to))
      throw ConfigError("link " + link_name(l.id) + " references unknown node");
    if (!(l.p >= 0.0 && l.p < 0.5))
      throw ParameterError("link " + link_name(l.id) +
                           " crossover must lie in [0, 0.5)");
    if (!link_index_.emplace(l.id, i).second)
      throw ConfigError("duplicate link " + link_name(l.id));
    outgoing_[l.id.from].push_back(l.id);
    incoming_[l.id.to].push_back(l.id);
  }

  for (const auto& n : nodes_) {
    std::size_t in = incoming_.contains(n.id) ? incoming_[n.id].size() : 0;
    std::size_t out = outgoing_.contains(n.id) ? outgoing_[n.id].size() : 0;
    switch (n.role) {
      case NodeRole::kSource:
        if (in != 0)
          throw ConfigError("source node " + std::to_string(n.id) +
                            " must have no inputs");
        break;
      case NodeRole::kForward:
        if (in != 1)
          throw ConfigError("forward node " + std::to_string(n.id) +
                            " must have exactly 1 input");
        break;
      case NodeRole::kXor:
        if (in != 2)
          throw ConfigError("xor node " + std::to_string(n.id) +
                            " must have exactly 2 inputs");
        break;
      case NodeRole::kDestination:
        if (out != 0)
          throw ConfigError("destination node " + std::to_string(n.id) +
                            " must have no outputs");
        break;
    }
  }

  // Kahn topological order; also the cycle check.
  std::map<int, std::size_t> indeg;
  for (const auto& n : nodes_) indeg[n.id] = 0;
  for (const auto& l : links_) ++indeg[l.id.to];
  std::vector<int> queue;
  for (const auto& n : nodes_)
    if (indeg[n.id] == 0) queue.push_back(n.id);
  std::size_t head = 0;
  while (head < queue.size()) {
    int id = queue[head++];
    topo_order_.push_back(id);
    if (auto it = outgoing_.find(id); it != outgoing_.end())
      for (LinkId l : it->second)
        if (--indeg[l.to] == 0) queue.push_back(l.to);
  }
  if (topo_order_.size() != nodes_.size())
    throw ConfigError("topology contains a cycle");

  std::map<LinkId, std::uint32_t> assigned;
  std::set<std::uint32_t> words;
  for (const auto& a : source_assignments_) {
    auto it = link_index_.find(a.link);
    if (it == link_index_.end())
      throw ConfigError("assignment references unknown link " +
                        link_name(a.link));
    if (role.at(a.link.from) != NodeRole::kSource)
      throw ConfigError("assignment on non-source link " + link_name(a.link));
    if (!assigned.emplace(a.link, a.word).second)
      throw ConfigError("link " + link_name(a.link) + " assigned twice");
    words.insert(a.word);
  }
  for (const auto& [node, out] : outgoing_)
    if (role.at(node) == NodeRole::kSource)
      for (LinkId l : out)
        if (!assigned.contains(l))
          throw ConfigError("source link " + link_name(l) +
                            " has no word assignment");
  num_words_ = words.empty() ? 0 : *words.rbegin() + 1;
  if (words.size() != num_words_)
    throw ConfigError("source word indices must be contiguous from 0");

  // Per-link packet composition, in topological order. XOR nodes take the
  // symmetric difference, so a word or error appearing on both inputs
  // cancels, exactly as the bits do.
  std::vector<std::vector<std::uint32_t>> word_sets(links_.size());
  std::vector<std::vector<std::uint32_t>> error_sets(links_.size());
  std::vector<char> done(links_.size(), 0);
  auto merge = [](const std::vector<std::uint32_t>& a,
                  const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
  };
  for (int node : topo_order_) {
    auto out_it = outgoing_.find(node);
    if (out_it == outgoing_.end()) continue;
    std::vector<std::uint32_t> words_in;
    std::vector<std::uint32_t> errors_in;  // link indices, sorted
    switch (role.at(node)) {
      case NodeRole::kSource:
        break;  // per-link words handled below
      case NodeRole::kForward: {
        std::size_t li = link_index_.at(incoming_.at(node)[0]);
        words_in = word_sets[li];
        errors_in = error_sets[li];
        break;
      }
      case NodeRole::kXor: {
        std::size_t a = link_index_.at(incoming_.at(node)[0]);
        std::size_t b = link_index_.at(incoming_.at(node)[1]);
        words_in = merge(word_sets[a], word_sets[b]);
        errors_in = merge(error_sets[a], error_sets[b]);
        break;
      }
      case NodeRole::kDestination:
        break;
    }
    for (LinkId l : out_it->second) {
      std::size_t li = link_index_.at(l);
      word_sets[li] = role.at(node) == NodeRole::kSource
                          ? std::vector<std::uint32_t>{assigned.at(l)}
                          : words_in;
      error_sets[li] = errors_in;
      auto pos = std::lower_bound(error_sets[li].begin(), error_sets[li].end(),
                                  static_cast<std::uint32_t>(li));
      error_sets[li].insert(pos, static_cast<std::uint32_t>(li));
      done[li] = 1;
    }
  }
  for (char d : done)
    if (!d) throw ConfigError("internal: link not reached by traversal");
  compositions_.resize(links_.size());
  for (std::size_t li = 0; li < links_.size(); ++li) {
    compositions_[li].words = std::move(word_sets[li]);
    for (std::uint32_t e : error_sets[li])
      compositions_[li].error_links.push_back(links_[e].id);
  }

  for (const auto& taps : destination_taps_) {
    if (role.at(taps.node) != NodeRole::kDestination)
      throw ConfigError("taps declared on non-destination node " +
                        std::to_string(taps.node));
    for (LinkId l : taps.links) {
      if (l.to != taps.node)
        throw ConfigError("tap " + link_name(l) + " does not end at node " +
                          std::to_string(taps.node));
      std::size_t li = link_index(l);
      if (compositions_[li].words.empty())
        throw ConfigError("tap " + link_name(l) +
                          " carries no source word (not reachable)");
    }
  }
}

std::size_t NetworkTopology::link_index(LinkId id) const {
  auto it = link_index_.find(id);
  if (it == link_index_.end())
    throw ConfigError("unknown link " + link_name(id));
  return it->second;
}

const std::vector<LinkId>& NetworkTopology::outgoing(int node) const {
  static const std::vector<LinkId> kEmpty;
  auto it = outgoing_.find(node);
  return it == outgoing_.end() ? kEmpty : it->second;
}

const std::vector<LinkId>& NetworkTopology::incoming(int node) const {
  static const std::vector<LinkId> kEmpty;
  auto it = incoming_.find(node);
  return it == incoming_.end() ? kEmpty : it->second;
}

double NetworkTopology::effective_crossover_of(LinkId id) const {
  const Composition& comp = composition(id);
  double p = 0.0;
  for (LinkId l : comp.error_links) p = bsc_convolve(p, link(l).p);
  return p;
}

NetworkTopology scale_link_probabilities(const NetworkTopology& topo,
                                         double scale) {
  if (!(scale >= 0.0)) throw ParameterError("scale must be non-negative");
  std::vector<Link> links = topo.links();
  for (auto& l : links) {
    l.p *= scale;
    if (!(l.p >= 0.0 && l.p < 0.5))
      throw ParameterError("scaled crossover leaves [0, 0.5) on link " +
                           link_name(l.id));
  }
  return NetworkTopology(topo.nodes(), std::move(links),
                         topo.source_assignments(), topo.destination_taps());
}

NetworkTopology butterfly(double p, double mult_26) {
  if (!(p >= 0.0 && p < 0.5))
    throw ParameterError("crossover must lie in [0, 0.5)");
  if (!(mult_26 >= 0.0) || !(mult_26 * p < 0.5))
    throw ParameterError("mult_26 * p must lie in [0, 0.5)");
  std::vector<Node> nodes = {
      {1, NodeRole::kSource},     {2, NodeRole::kForward},
      {3, NodeRole::kForward},    {4, NodeRole::kXor},
      {5, NodeRole::kForward},    {6, NodeRole::kDestination},
      {7, NodeRole::kDestination}};
  std::vector<Link> links = {
      {{1, 2}, p}, {{1, 3}, p},           {{2, 4}, p},
      {{2, 6}, mult_26 * p},              {{3, 4}, p},
      {{3, 7}, p}, {{4, 5}, p},           {{5, 6}, p},
      {{5, 7}, p}};
  std::vector<SourceAssignment> assign = {{{1, 2}, 0}, {{1, 3}, 1}};
  std::vector<DestinationTaps> taps = {{6, {{2, 6}, {5, 6}}},
                                       {7, {{3, 7}, {5, 7}}}};
  return NetworkTopology(std::move(nodes), std::move(links), std::move(assign),
                         std::move(taps));
}

NetworkTopology fig1_network(double p13, double p23, double p34, double p14) {
  for (double p : {p13, p23, p34, p14})
    if (!(p >= 0.0 && p < 0.5))
      throw ParameterError("crossover must lie in [0, 0.5)");
  std::vector<Node> nodes = {{1, NodeRole::kSource},
                             {2, NodeRole::kSource},
                             {3, NodeRole::kXor},
                             {4, NodeRole::kDestination}};
  std::vector<Link> links = {
      {{1, 3}, p13}, {{1, 4}, p14}, {{2, 3}, p23}, {{3, 4}, p34}};
  // Node 1 repeats the same word on both of its links.
  std::vector<SourceAssignment> assign = {{{1, 3}, 0}, {{1, 4}, 0}, {{2, 3}, 1}};
  std::vector<DestinationTaps> taps = {{4, {{1, 4}, {3, 4}}}};
  return NetworkTopology(std::move(nodes), std::move(links), std::move(assign),
                         std::move(taps));
}

std::string topology_to_json_string(const NetworkTopology& topo) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : topo.nodes())
    j["nodes"].push_back({{"id", n.id}, {"role", to_string(n.role)}});
  j["links"] = nlohmann::json::array();
  for (const auto& l : topo.links())
    j["links"].push_back({{"from", l.id.from}, {"to", l.id.to}, {"p", l.p}});
  j["source_assignments"] = nlohmann::json::array();
  for (const auto& a : topo.source_assignments())
    j["source_assignments"].push_back(
        {{"from", a.link.from}, {"to", a.link.to}, {"word", a.word}});
  j["destination_taps"] = nlohmann::json::array();
  for (const auto& t : topo.destination_taps()) {
    nlohmann::json links = nlohmann::json::array();
    for (LinkId l : t.links) links.push_back({{"from", l.from}, {"to", l.to}});
    j["destination_taps"].push_back({{"node", t.node}, {"links", links}});
  }
  return j.dump(2) + "\n";
}

NetworkTopology topology_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("topology JSON parse error: ") + e.what());
  }
  try {
    std::vector<Node> nodes;
    for (const auto& n : j.at("nodes"))
      nodes.push_back({n.at("id").get<int>(),
                       node_role_from_string(n.at("role").get<std::string>())});
    std::vector<Link> links;
    for (const auto& l : j.at("links"))
      links.push_back({{l.at("from").get<int>(), l.at("to").get<int>()},
                       l.at("p").get<double>()});
    std::vector<SourceAssignment> assign;
    for (const auto& a : j.at("source_assignments"))
      assign.push_back({{a.at("from").get<int>(), a.at("to").get<int>()},
                        a.at("word").get<std::uint32_t>()});
    std::vector<DestinationTaps> taps;
    for (const auto& t : j.at("destination_taps")) {
      DestinationTaps dt;
      dt.node = t.at("node").get<int>();
      for (const auto& l : t.at("links"))
        dt.links.push_back({l.at("from").get<int>(), l.at("to").get<int>()});
      taps.push_back(std::move(dt));
    }
    return NetworkTopology(std::move(nodes), std::move(links),
                           std::move(assign), std::move(taps));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("topology JSON schema error: ") + e.what());
  }
}

void save_topology_file(const NetworkTopology& topo, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << topology_to_json_string(topo);
}

NetworkTopology load_topology_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return topology_from_json_string(buf.str());
}

std::pair<BitVector, BitVector> bsc_transmit(const BitVector& x, double p,
                                             const SeededRng& rng, LinkId link,
                                             std::uint64_t trial) {
  if (!(p >= 0.0 && p < 0.5))
    throw ParameterError("crossover must lie in [0, 0.5)");
  StreamRng stream(
      derive_stream(rng.seed, kPurposeLinkNoise, link_key(link), 0, trial));
  BitVector e(x.size());
  auto words = e.words();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (stream.bernoulli(p)) words[i >> 6] |= 1ULL << (i & 63);
  BitVector y = x;
  y ^= e;
  return {std::move(y), std::move(e)};
}

BitVector random_message(std::size_t k, const SeededRng& rng,
                         std::uint32_t word, std::uint64_t trial) {
  StreamRng stream(derive_stream(rng.seed, kPurposeMessage, word, 0, trial));
  BitVector u(k);
  auto words = u.words();
  for (std::size_t w = 0; w < words.size(); ++w) words[w] = stream.next_u64();
  if (k & 63) words[words.size() - 1] &= (~0ULL >> (64 - (k & 63)));
  return u;
}

double bsc_convolve(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 0.5) || !(p2 >= 0.0 && p2 <= 0.5))
    throw ParameterError("bsc_convolve requires probabilities in [0, 0.5]");
  return p1 * (1.0 - p2) + (1.0 - p1) * p2;
}

double effective_crossover(std::span<const double> path) {
  double p = 0.0;
  for (double step : path) p = bsc_convolve(p, step);
  return p;
}

const LinkTranscript& transcript_for(const Transcript& t,
                                     const NetworkTopology& topo, LinkId id) {
  return t.record(topo.link_index(id));
}

Transcript simulate(const NetworkTopology& topo,
                    const std::map<LinkId, BitVector>& inputs,
                    const SeededRng& rng, std::uint64_t trial) {
  // Validate the input set: exactly the source outgoing links, all the same
  // length, and equal words wherever two links share an assignment.
  std::size_t n = 0;
  std::map<LinkId, std::uint32_t> word_of;
  for (const auto& a : topo.source_assignments()) word_of[a.link] = a.word;
  for (const auto& [link, bits] : inputs) {
    if (!word_of.contains(link))
      throw ConfigError("input given for non-source link " + link_name(link));
    if (n == 0) n = bits.size();
    if (bits.size() != n || n == 0)
      throw ConfigError("source inputs must share one non-zero length");
  }
  std::map<std::uint32_t, const BitVector*> word_seen;
  for (const auto& [link, word] : word_of) {
    auto it = inputs.find(link);
    if (it == inputs.end())
      throw ConfigError("missing input for source link " + link_name(link));
    auto [pos, fresh] = word_seen.emplace(word, &it->second);
    if (!fresh && !(*pos->second == it->second))
      throw ConfigError("links sharing word " + std::to_string(word) +
                        " were given different inputs");
  }

  Transcript transcript(topo.links().size());
  std::vector<char> have(topo.links().size(), 0);
  for (int node : topo.topo_order()) {
    const auto& out = topo.outgoing(node);
    if (out.empty()) continue;
    NodeRole role = NodeRole::kForward;
    for (const auto& nd : topo.nodes())
      if (nd.id == node) role = nd.role;

    const BitVector* relay_word = nullptr;
    BitVector xor_word;
    if (role == NodeRole::kForward) {
      std::size_t li = topo.link_index(topo.incoming(node)[0]);
      relay_word = &transcript.record(li).y;
    } else if (role == NodeRole::kXor) {
      std::size_t a = topo.link_index(topo.incoming(node)[0]);
      std::size_t b = topo.link_index(topo.incoming(node)[1]);
      xor_word = transcript.record(a).y;
      xor_word ^= transcript.record(b).y;
      relay_word = &xor_word;
    }

    for (LinkId l : out) {
      std::size_t li = topo.link_index(l);
      LinkTranscript& rec = transcript.record(li);
      rec.x = role == NodeRole::kSource ? inputs.at(l) : *relay_word;
      auto [y, e] = bsc_transmit(rec.x, topo.link(l).p, rng, l, trial);
      rec.y = std::move(y);
      rec.e = std::move(e);
      have[li] = 1;
    }
  }
  for (char h : have)
    if (!h) throw ConfigError("internal: link left unsimulated");
  return transcript;
}

std::map<LinkId, BitVector> assign_source_words(
    const NetworkTopology& topo, std::span<const BitVector> words) {
  if (words.size() != topo.num_words())
    throw ConfigError("expected " + std::to_string(topo.num_words()) +
                      " source words, got " + std::to_string(words.size()));
  std::map<LinkId, BitVector> inputs;
  for (const auto& a : topo.source_assignments())
    inputs.emplace(a.link, words[a.word]);
  return inputs;
}

}  // namespace netrelay
