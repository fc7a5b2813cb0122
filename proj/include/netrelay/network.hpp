#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netrelay/gf2.hpp"

namespace netrelay {

enum class NodeRole { kSource, kForward, kXor, kDestination };

const char* to_string(NodeRole role);
NodeRole node_role_from_string(const std::string& s);

struct LinkId {
  int from = 0;
  int to = 0;
  auto operator<=>(const LinkId&) const = default;
};

struct Node {
  int id = 0;
  NodeRole role = NodeRole::kForward;
};

struct Link {
  LinkId id;
  double p = 0.0;  // crossover probability, [0, 0.5)
};

struct SourceAssignment {
  LinkId link;
  std::uint32_t word = 0;  // which source codeword this link carries
};

struct DestinationTaps {
  int node = 0;
  std::vector<LinkId> links;  // incoming links this destination observes
};

// Immutable DAG of BSC links between source, forward, XOR and destination
// nodes. Construction validates the graph (acyclic, XOR nodes have exactly
// two inputs, forward nodes one, taps reachable from a source) and
// precomputes, per link, which source words and which upstream error vectors
// the carried packet is an XOR of.
class NetworkTopology {
 public:
  struct Composition {
    std::vector<std::uint32_t> words;   // source word indices, XORed in
    std::vector<LinkId> error_links;    // links whose error vectors XOR in
  };

  NetworkTopology(std::vector<Node> nodes, std::vector<Link> links,
                  std::vector<SourceAssignment> source_assignments,
                  std::vector<DestinationTaps> destination_taps);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<SourceAssignment>& source_assignments() const {
    return source_assignments_;
  }
  const std::vector<DestinationTaps>& destination_taps() const {
    return destination_taps_;
  }

  std::size_t link_index(LinkId id) const;  // ConfigError when absent
  const Link& link(LinkId id) const { return links_[link_index(id)]; }
  std::size_t num_words() const { return num_words_; }

  const Composition& composition(LinkId id) const {
    return compositions_[link_index(id)];
  }
  // Marginal crossover probability of the packet on this link: the fold of
  // every upstream error link's p. Correlation between links sharing
  // upstream errors is deliberately not represented here.
  double effective_crossover_of(LinkId id) const;

  const std::vector<int>& topo_order() const { return topo_order_; }
  const std::vector<LinkId>& outgoing(int node) const;
  const std::vector<LinkId>& incoming(int node) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<SourceAssignment> source_assignments_;
  std::vector<DestinationTaps> destination_taps_;
  std::map<LinkId, std::size_t> link_index_;
  std::map<int, std::vector<LinkId>> outgoing_;
  std::map<int, std::vector<LinkId>> incoming_;
  std::vector<int> topo_order_;  // node ids, sources first
  std::vector<Composition> compositions_;
  std::size_t num_words_ = 0;
};

// Link probabilities scaled by a common factor; used to sweep file-defined
// topologies. Throws ParameterError if any scaled p leaves [0, 0.5).
NetworkTopology scale_link_probabilities(const NetworkTopology& topo,
                                         double scale);

NetworkTopology butterfly(double p, double mult_26);
NetworkTopology fig1_network(double p13, double p23, double p34, double p14);

std::string topology_to_json_string(const NetworkTopology& topo);
NetworkTopology topology_from_json_string(const std::string& text);
void save_topology_file(const NetworkTopology& topo, const std::string& path);
NetworkTopology load_topology_file(const std::string& path);

// Root of all noise and message randomness. Every (purpose, link, trial)
// tuple gets its own counter-based stream, so adding links or reordering
// evaluation never perturbs existing streams.
struct SeededRng {
  std::uint64_t seed = 0;
};

// y = x xor e with e[i] i.i.d. Bernoulli(p) from the (seed, link, trial)
// stream. Returns {y, e}.
std::pair<BitVector, BitVector> bsc_transmit(const BitVector& x, double p,
                                             const SeededRng& rng, LinkId link,
                                             std::uint64_t trial);

// Uniform random message bits from the (seed, word, trial) stream.
BitVector random_message(std::size_t k, const SeededRng& rng,
                         std::uint32_t word, std::uint64_t trial);

// Crossover probability of two cascaded BSCs: p1(1-p2) + (1-p1)p2.
double bsc_convolve(double p1, double p2);

// Left fold of bsc_convolve; empty path is noiseless.
double effective_crossover(std::span<const double> path);

struct LinkTranscript {
  BitVector x, y, e;  // y == x ^ e
  bool operator==(const LinkTranscript&) const = default;
};

class Transcript {
 public:
  explicit Transcript(std::size_t n_links) : records_(n_links) {}
  LinkTranscript& record(std::size_t link_index) { return records_[link_index]; }
  const LinkTranscript& record(std::size_t link_index) const {
    return records_[link_index];
  }
  std::size_t size() const { return records_.size(); }
  bool operator==(const Transcript&) const = default;

 private:
  std::vector<LinkTranscript> records_;
};

const LinkTranscript& transcript_for(const Transcript& t,
                                     const NetworkTopology& topo, LinkId id);

// Evaluates the network in topological order: forward nodes copy their
// received word to every outgoing link, XOR nodes emit the XOR of their two
// received words, and each link applies bsc_transmit. Inputs are keyed by
// source outgoing link; links assigned the same source word must be given
// equal inputs.
Transcript simulate(const NetworkTopology& topo,
                    const std::map<LinkId, BitVector>& inputs,
                    const SeededRng& rng, std::uint64_t trial);

// Builds the input map from per-word codewords using the topology's source
// assignments (which enforces equal words on co-assigned links).
std::map<LinkId, BitVector> assign_source_words(
    const NetworkTopology& topo, std::span<const BitVector> words);

}  // namespace netrelay
