#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netrelay/ldpc.hpp"
#include "netrelay/network.hpp"
#include "netrelay/rate_region.hpp"
#include "netrelay/strategies.hpp"

namespace netrelay {

struct ExperimentConfig {
  // "butterfly", "fig1", or a path to a topology JSON file. For a file
  // topology, each swept p acts as a scale factor on the stored link
  // probabilities (1.0 reproduces the file as-is).
  std::string network = "butterfly";
  double mult_26 = 3.0;  // crossover multiplier on link 2->6 (butterfly only)
  std::vector<double> p_values;

  std::size_t n = 500;
  unsigned wc = 3;
  unsigned wr = 6;
  std::optional<std::uint64_t> seed_a;  // default: derived from master_seed
  std::optional<std::uint64_t> seed_b;
  bool shared_code = false;  // reuse code A for B

  std::vector<Strategy> strategies = all_strategies();
  unsigned max_iters = 20;

  // A sweep point stops once every strategy has at least min_bit_errors on
  // each of its two streams, or at max_frames, whichever comes first.
  std::uint64_t min_bit_errors = 100;
  std::uint64_t max_frames = 100000;

  std::uint64_t master_seed = 1;
  std::string out_path;  // empty writes CSV to stdout

  // Decoder-side LLR initialization normally uses the analytic effective
  // crossover of each tap; these force a mismatched value instead.
  std::optional<double> p_direct_override;
  std::optional<double> p_combined_override;

  void validate() const;  // throws ConfigError
  static ExperimentConfig from_json_string(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

struct FrameStats {
  std::uint32_t bit_errors_a = 0;  // message-bit errors
  std::uint32_t bit_errors_b = 0;
  bool converged_a = false;
  bool converged_b = false;
  std::uint32_t iterations = 0;
};

struct BerRecord {
  std::string strategy;
  double p = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors_a = 0;
  std::uint64_t bit_errors_b = 0;
  double ber_a = 0.0;  // bit_errors_a / (frames * k)
  double ber_b = 0.0;
  double mean_iters = 0.0;
  double conv_rate = 0.0;  // fraction of frames with both decodes converged
};

BerRecord make_record(const std::string& strategy, double p, std::size_t k,
                      std::uint64_t frames, std::uint64_t errors_a,
                      std::uint64_t errors_b, std::uint64_t iterations_total,
                      std::uint64_t both_converged);
BerRecord aggregate_record(const std::string& strategy, double p,
                           std::size_t k, std::span<const FrameStats> frames);

// Codes, cached decoder graphs, and the per-point pipeline. Frames are
// deterministic in (config, p, trial index) alone: every strategy decodes
// the same transcript of a trial, and thread count cannot change any output.
class SweepRunner {
 public:
  explicit SweepRunner(const ExperimentConfig& cfg);

  // stats[strategy_index][i] describes trial first_frame + i.
  std::vector<std::vector<FrameStats>> run_frames(double p,
                                                  std::uint64_t first_frame,
                                                  std::uint64_t frames) const;

  std::vector<BerRecord> run_sweep() const;

  const ExperimentConfig& config() const { return cfg_; }
  const LdpcCode& code_a() const { return code_a_; }
  const LdpcCode& code_b() const { return shared_ ? code_a_ : code_b_; }
  const DestinationDecoder& decoder() const { return decoder_; }

 private:
  NetworkTopology make_topology(double p) const;

  ExperimentConfig cfg_;
  bool shared_ = false;
  LdpcCode code_a_;
  LdpcCode code_b_;  // unused when shared_
  DestinationDecoder decoder_;
  std::optional<NetworkTopology> file_topology_;
};

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg);

void write_ber_csv(std::span<const BerRecord> records, std::ostream& out);
std::string ber_csv_string(std::span<const BerRecord> records);

struct RegionReport {
  std::string csv;
  SubsetChainReport chain;
};
RegionReport run_region_report(const LinkParams& lp, std::size_t samples);

// Fast self-checks behind the `verify` CLI subcommand; prints one line per
// check and returns false if any fails.
bool run_verification(std::ostream& log);

// NETRELAY_THREADS caps worker concurrency; 0 or unset means one worker per
// hardware thread.
unsigned worker_threads();

// Shortest round-trip decimal form, used everywhere CSV is written.
std::string format_double(double v);

}  // namespace netrelay
