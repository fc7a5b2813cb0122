#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netrelay {

// Crossover probabilities of the four-node relay network: two sources, one
// XOR relay (node 3), one destination (node 4), with node 1 repeating its
// word on links 1->3 and 1->4.
struct LinkParams {
  double p13 = 0.0;
  double p23 = 0.0;
  double p34 = 0.0;
  double p14 = 0.0;
};

// Constraint-form rate region: R_A <= ra_max, R_B <= rb_max, and optionally
// R_A + R_B <= sum_max. These shapes are already convex, so the constraint
// set is its own convex hull.
struct RateRegion {
  double ra_max = 0.0;
  double rb_max = 0.0;
  std::optional<double> sum_max;
};

double binary_entropy(double p);  // base 2, H(0) = H(1) = 0 by continuity
double bsc_capacity(double p);    // 1 - H(p), p in [0, 0.5]

// Crossover of the relay path 1->3 / 2->3 composed with 3->4:
// [(1-p13)(1-p23) + p13 p23] p34 + [p13(1-p23) + (1-p13)p23] (1-p34).
double p_prime(const LinkParams& lp);

// Crossover seen when the raw direct word is XORed off the relay word:
// p' convolved with p14. Tests check this against the full eight-term
// expansion over all four links.
double p_double_prime(const LinkParams& lp);

RateRegion region_nc(const LinkParams& lp);      // network-then-channel
RateRegion region_serial(const LinkParams& lp);  // decode A, strip, decode B
RateRegion region_joint(const LinkParams& lp);   // joint decoding pentagon

bool region_contains(const RateRegion& r, double ra, double rb);

// Pareto frontier sampled at `samples` evenly spaced R_B values in
// [0, rb_max], as (ra, rb) pairs.
std::vector<std::pair<double, double>> region_boundary(const RateRegion& r,
                                                       std::size_t samples);

struct SubsetChainReport {
  bool pass = false;
  std::string detail;
};

// Checks p'' >= p', the closed-form difference identity
// p'' - p' = p14 (1-2p13)(1-2p23)(1-2p34), and the region inclusion chain
// nc within serial within joint by constraint dominance.
SubsetChainReport verify_subset_chain(const LinkParams& lp);

}  // namespace netrelay
