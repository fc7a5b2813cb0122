#include "netrelay/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "netrelay/alist.hpp"
#include "netrelay/errors.hpp"
#include "netrelay/rng.hpp"

namespace netrelay {

namespace {
constexpr std::uint64_t kSeedTagCodeA = 0x636f64652d41ULL;
constexpr std::uint64_t kSeedTagCodeB = 0x636f64652d42ULL;
constexpr double kMinEffectiveP = 1e-12;
constexpr std::uint64_t kBatchFrames = 1024;

double clamp_effective(double p) {
  return std::min(std::max(p, kMinEffectiveP), 0.5 - kMinEffectiveP);
}
}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

unsigned worker_threads() {
  if (const char* env = std::getenv("NETRELAY_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

void ExperimentConfig::validate() const {
  if (network != "butterfly" && network != "fig1") {
    std::ifstream probe(network);
    if (!probe)
      throw ConfigError("network must be 'butterfly', 'fig1', or a readable "
                        "topology file: " + network);
  }
  if (p_values.empty()) throw ConfigError("no sweep points given");
  for (double p : p_values) {
    if (!(p >= 0.0 && p < 0.5))
      throw ConfigError("sweep p must lie in [0, 0.5)");
    if (network == "butterfly" && !(mult_26 * p < 0.5))
      throw ConfigError("mult_26 * p must stay below 0.5");
  }
  if (!(mult_26 >= 0.0)) throw ConfigError("mult_26 must be non-negative");
  if (n == 0 || wc < 2 || wr == 0 || (n * wc) % wr != 0)
    throw ConfigError("code parameters need n >= 1, wc >= 2, wr | n*wc");
  if (strategies.empty()) throw ConfigError("no strategies selected");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (max_frames < 1) throw ConfigError("max_frames must be >= 1");
  for (const auto& ov : {p_direct_override, p_combined_override})
    if (ov && !(*ov > 0.0 && *ov < 0.5))
      throw ConfigError("crossover overrides must lie in (0, 0.5)");
}

namespace {

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("network")) cfg.network = j["network"].get<std::string>();
    if (j.contains("mult_26")) cfg.mult_26 = j["mult_26"].get<double>();
    if (j.contains("p_list"))
      cfg.p_values = j["p_list"].get<std::vector<double>>();
    if (j.contains("n")) cfg.n = j["n"].get<std::size_t>();
    if (j.contains("wc")) cfg.wc = j["wc"].get<unsigned>();
    if (j.contains("wr")) cfg.wr = j["wr"].get<unsigned>();
    if (j.contains("seed_a")) cfg.seed_a = j["seed_a"].get<std::uint64_t>();
    if (j.contains("seed_b")) cfg.seed_b = j["seed_b"].get<std::uint64_t>();
    if (j.contains("shared_code")) cfg.shared_code = j["shared_code"].get<bool>();
    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const auto& s : j["strategies"])
        cfg.strategies.push_back(strategy_from_string(s.get<std::string>()));
    }
    if (j.contains("max_iters")) cfg.max_iters = j["max_iters"].get<unsigned>();
    if (j.contains("min_bit_errors"))
      cfg.min_bit_errors = j["min_bit_errors"].get<std::uint64_t>();
    if (j.contains("max_frames"))
      cfg.max_frames = j["max_frames"].get<std::uint64_t>();
    if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
    if (j.contains("p_direct_override"))
      cfg.p_direct_override = j["p_direct_override"].get<double>();
    if (j.contains("p_combined_override"))
      cfg.p_combined_override = j["p_combined_override"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON schema error: ") + e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  try {
    return config_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

BerRecord make_record(const std::string& strategy, double p, std::size_t k,
                      std::uint64_t frames, std::uint64_t errors_a,
                      std::uint64_t errors_b, std::uint64_t iterations_total,
                      std::uint64_t both_converged) {
  BerRecord rec;
  rec.strategy = strategy;
  rec.p = p;
  rec.frames = frames;
  rec.bit_errors_a = errors_a;
  rec.bit_errors_b = errors_b;
  double denom = static_cast<double>(frames) * static_cast<double>(k);
  rec.ber_a = frames ? static_cast<double>(errors_a) / denom : 0.0;
  rec.ber_b = frames ? static_cast<double>(errors_b) / denom : 0.0;
  rec.mean_iters =
      frames ? static_cast<double>(iterations_total) / static_cast<double>(frames)
             : 0.0;
  rec.conv_rate =
      frames ? static_cast<double>(both_converged) / static_cast<double>(frames)
             : 0.0;
  return rec;
}

BerRecord aggregate_record(const std::string& strategy, double p,
                           std::size_t k, std::span<const FrameStats> frames) {
  std::uint64_t ea = 0, eb = 0, iters = 0, conv = 0;
  for (const FrameStats& f : frames) {
    ea += f.bit_errors_a;
    eb += f.bit_errors_b;
    iters += f.iterations;
    conv += (f.converged_a && f.converged_b) ? 1 : 0;
  }
  return make_record(strategy, p, k, frames.size(), ea, eb, iters, conv);
}

SweepRunner::SweepRunner(const ExperimentConfig& cfg)
    : cfg_(cfg),
      shared_(cfg.shared_code),
      code_a_(construct_regular(
          cfg.n, cfg.wc, cfg.wr,
          cfg.seed_a.value_or(mix64(cfg.master_seed ^ kSeedTagCodeA)))),
      code_b_(shared_ ? code_a_
                      : construct_regular(cfg.n, cfg.wc, cfg.wr,
                                          cfg.seed_b.value_or(mix64(
                                              cfg.master_seed ^ kSeedTagCodeB)))),
      decoder_(code_a_, shared_ ? code_a_ : code_b_) {
  cfg_.validate();
  if (cfg_.network != "butterfly" && cfg_.network != "fig1")
    file_topology_ = load_topology_file(cfg_.network);
}

NetworkTopology SweepRunner::make_topology(double p) const {
  if (cfg_.network == "butterfly") return butterfly(p, cfg_.mult_26);
  if (cfg_.network == "fig1") return fig1_network(p, p, p, p);
  return scale_link_probabilities(*file_topology_, p);
}

std::vector<std::vector<FrameStats>> SweepRunner::run_frames(
    double p, std::uint64_t first_frame, std::uint64_t frames) const {
  NetworkTopology topo = make_topology(p);
  if (topo.num_words() != 2)
    throw ConfigError("two-source strategies need exactly two source words");
  if (topo.destination_taps().empty())
    throw ConfigError("topology declares no destination taps");
  const DestinationTaps& taps = topo.destination_taps().front();

  // Identify which tap carries word A alone and which carries A xor B.
  std::optional<LinkId> direct, combined;
  for (LinkId l : taps.links) {
    const auto& words = topo.composition(l).words;
    if (words == std::vector<std::uint32_t>{0}) direct = l;
    if (words == std::vector<std::uint32_t>{0, 1}) combined = l;
  }
  if (!direct || !combined)
    throw ConfigError("destination must tap one word-A link and one A^B link");

  const double p_direct = clamp_effective(cfg_.p_direct_override.value_or(
      topo.effective_crossover_of(*direct)));
  const double p_combined = clamp_effective(cfg_.p_combined_override.value_or(
      topo.effective_crossover_of(*combined)));
  const std::size_t direct_idx = topo.link_index(*direct);
  const std::size_t combined_idx = topo.link_index(*combined);

  const SeededRng rng{cfg_.master_seed};
  const std::size_t k = code_a_.k;
  const LdpcCode& cb = code_b();

  std::vector<std::vector<FrameStats>> stats(cfg_.strategies.size());
  for (auto& s : stats) s.resize(frames);

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      const std::uint64_t trial = first_frame + i;
      BitVector u_a = random_message(k, rng, 0, trial);
      BitVector u_b = random_message(k, rng, 1, trial);
      BitVector words[2] = {encode(code_a_, u_a), encode(cb, u_b)};
      Transcript tr = simulate(topo, assign_source_words(topo, words), rng, trial);

      DestinationObservation obs{tr.record(direct_idx).y,
                                 tr.record(combined_idx).y, p_direct,
                                 p_combined};
      for (std::size_t s = 0; s < cfg_.strategies.size(); ++s) {
        StrategyOutcome outcome =
            decoder_.decode(cfg_.strategies[s], obs, cfg_.max_iters);
        FrameStats& f = stats[s][i];
        f.bit_errors_a = static_cast<std::uint32_t>(
            (extract_message(code_a_, outcome.c_hat_a) ^ u_a).popcount());
        f.bit_errors_b = static_cast<std::uint32_t>(
            (extract_message(cb, outcome.c_hat_b) ^ u_b).popcount());
        f.converged_a = outcome.converged_a;
        f.converged_b = outcome.converged_b;
        f.iterations = outcome.iterations;
      }
    }
  };

  unsigned n_threads = std::min<std::uint64_t>(worker_threads(), frames);
  if (n_threads <= 1) {
    run_range(0, frames);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (frames + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      std::uint64_t lo = t * chunk, hi = std::min(frames, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return stats;
}

std::vector<BerRecord> SweepRunner::run_sweep() const {
  std::vector<BerRecord> records;
  for (double p : cfg_.p_values) {
    const std::size_t ns = cfg_.strategies.size();
    std::vector<std::uint64_t> ea(ns, 0), eb(ns, 0), iters(ns, 0), conv(ns, 0);
    std::uint64_t frames_done = 0;
    while (frames_done < cfg_.max_frames) {
      std::uint64_t batch = std::min(kBatchFrames, cfg_.max_frames - frames_done);
      auto stats = run_frames(p, frames_done, batch);
      for (std::size_t s = 0; s < ns; ++s)
        for (const FrameStats& f : stats[s]) {
          ea[s] += f.bit_errors_a;
          eb[s] += f.bit_errors_b;
          iters[s] += f.iterations;
          conv[s] += (f.converged_a && f.converged_b) ? 1 : 0;
        }
      frames_done += batch;
      bool enough = true;
      for (std::size_t s = 0; s < ns; ++s)
        if (std::min(ea[s], eb[s]) < cfg_.min_bit_errors) enough = false;
      if (enough) break;
    }
    for (std::size_t s = 0; s < ns; ++s)
      records.push_back(make_record(to_string(cfg_.strategies[s]), p,
                                    code_a_.k, frames_done, ea[s], eb[s],
                                    iters[s], conv[s]));
  }
  return records;
}

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  return SweepRunner(cfg).run_sweep();
}

void write_ber_csv(std::span<const BerRecord> records, std::ostream& out) {
  out << "strategy,p,frames,bit_errors_a,bit_errors_b,ber_a,ber_b,mean_iters,"
         "conv_rate\n";
  for (const BerRecord& r : records)
    out << r.strategy << "," << format_double(r.p) << "," << r.frames << ","
        << r.bit_errors_a << "," << r.bit_errors_b << ","
        << format_double(r.ber_a) << "," << format_double(r.ber_b) << ","
        << format_double(r.mean_iters) << "," << format_double(r.conv_rate)
        << "\n";
}

std::string ber_csv_string(std::span<const BerRecord> records) {
  std::ostringstream out;
  write_ber_csv(records, out);
  return out.str();
}

RegionReport run_region_report(const LinkParams& lp, std::size_t samples) {
  std::ostringstream csv;
  csv << "record,strategy,index,r_a,r_b,r_sum\n";
  const std::pair<const char*, RateRegion> regions[] = {
      {"nc", region_nc(lp)},
      {"serial", region_serial(lp)},
      {"joint", region_joint(lp)}};
  for (const auto& [name, region] : regions) {
    auto boundary = region_boundary(region, samples);
    for (std::size_t i = 0; i < boundary.size(); ++i)
      csv << "boundary," << name << "," << i << ","
          << format_double(boundary[i].first) << ","
          << format_double(boundary[i].second) << ",\n";
  }
  for (const auto& [name, region] : regions)
    csv << "summary," << name << ",," << format_double(region.ra_max) << ","
        << format_double(region.rb_max) << ","
        << (region.sum_max ? format_double(*region.sum_max) : std::string())
        << "\n";
  return {csv.str(), verify_subset_chain(lp)};
}

}  // namespace netrelay
