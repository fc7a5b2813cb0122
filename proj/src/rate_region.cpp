#include "netrelay/rate_region.hpp"

#include <cmath>
#include <sstream>

#include "netrelay/errors.hpp"

namespace netrelay {

namespace {
void check_params(const LinkParams& lp) {
  for (double p : {lp.p13, lp.p23, lp.p34, lp.p14})
    if (!(p >= 0.0 && p <= 0.5))
      throw ParameterError("link crossover must lie in [0, 0.5]");
}
}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("entropy argument must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double bsc_capacity(double p) {
  if (!(p >= 0.0 && p <= 0.5))
    throw ParameterError("capacity argument must lie in [0, 0.5]");
  return 1.0 - binary_entropy(p);
}

double p_prime(const LinkParams& lp) {
  check_params(lp);
  double same = (1.0 - lp.p13) * (1.0 - lp.p23) + lp.p13 * lp.p23;
  double diff = lp.p13 * (1.0 - lp.p23) + (1.0 - lp.p13) * lp.p23;
  return same * lp.p34 + diff * (1.0 - lp.p34);
}

double p_double_prime(const LinkParams& lp) {
  double pp = p_prime(lp);
  return pp * (1.0 - lp.p14) + (1.0 - pp) * lp.p14;
}

RateRegion region_nc(const LinkParams& lp) {
  return {bsc_capacity(lp.p14), bsc_capacity(p_double_prime(lp)), std::nullopt};
}

RateRegion region_serial(const LinkParams& lp) {
  return {bsc_capacity(lp.p14), bsc_capacity(p_prime(lp)), std::nullopt};
}

RateRegion region_joint(const LinkParams& lp) {
  double c14 = bsc_capacity(lp.p14);
  double cp = bsc_capacity(p_prime(lp));
  double cpp = bsc_capacity(p_double_prime(lp));
  return {c14 + cp - cpp, cp, c14 + cp};
}

bool region_contains(const RateRegion& r, double ra, double rb) {
  if (!(ra >= 0.0 && rb >= 0.0))
    throw ParameterError("rates must be non-negative");
  if (ra > r.ra_max || rb > r.rb_max) return false;
  return !r.sum_max || ra + rb <= *r.sum_max;
}

std::vector<std::pair<double, double>> region_boundary(const RateRegion& r,
                                                       std::size_t samples) {
  if (samples < 2) throw ParameterError("need at least two boundary samples");
  std::vector<std::pair<double, double>> points;
  points.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double rb = r.rb_max * static_cast<double>(i) /
                static_cast<double>(samples - 1);
    double ra = r.ra_max;
    if (r.sum_max) ra = std::min(ra, *r.sum_max - rb);
    points.emplace_back(std::max(ra, 0.0), rb);
  }
  return points;
}

SubsetChainReport verify_subset_chain(const LinkParams& lp) {
  std::ostringstream detail;
  bool pass = true;

  double pp = p_prime(lp);
  double ppp = p_double_prime(lp);
  double identity =
      lp.p14 * (1.0 - 2.0 * lp.p13) * (1.0 - 2.0 * lp.p23) * (1.0 - 2.0 * lp.p34);
  if (!(ppp >= pp)) {
    pass = false;
    detail << "p''=" << ppp << " < p'=" << pp << "; ";
  }
  if (!(std::fabs((ppp - pp) - identity) <= 1e-12)) {
    pass = false;
    detail << "difference " << (ppp - pp) << " != identity " << identity
           << "; ";
  }

  RateRegion nc = region_nc(lp);
  RateRegion serial = region_serial(lp);
  RateRegion joint = region_joint(lp);
  if (!(nc.ra_max <= serial.ra_max && nc.rb_max <= serial.rb_max)) {
    pass = false;
    detail << "nc not dominated by serial; ";
  }
  const std::pair<double, double> vertices[] = {{serial.ra_max, 0.0},
                                                {0.0, serial.rb_max},
                                                {serial.ra_max, serial.rb_max},
                                                {0.0, 0.0}};
  for (auto [ra, rb] : vertices)
    if (!region_contains(joint, ra, rb)) {
      pass = false;
      detail << "serial vertex (" << ra << "," << rb << ") outside joint; ";
    }

  if (pass) detail << "chain holds";
  return {pass, detail.str()};
}

}  // namespace netrelay
