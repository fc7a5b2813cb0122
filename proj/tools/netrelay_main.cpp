#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netrelay/errors.hpp"
#include "netrelay/harness.hpp"

namespace {

using namespace netrelay;

int cmd_ber(const ExperimentConfig& cfg) {
  auto records = run_ber_sweep(cfg);
  std::string csv = ber_csv_string(records);
  if (cfg.out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + cfg.out_path);
    out << csv;
  }
  return 0;
}

int cmd_regions(const LinkParams& lp, std::size_t samples,
                const std::string& out_path) {
  RegionReport report = run_region_report(lp, samples);
  std::ostream& note = out_path.empty() ? std::cerr : std::cout;
  if (out_path.empty()) {
    std::cout << report.csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + out_path);
    out << report.csv;
  }
  note << "subset-chain: " << (report.chain.pass ? "PASS" : "FAIL") << " ("
       << report.chain.detail << ")\n";
  return report.chain.pass ? 0 : 2;
}

int cmd_make_code(std::size_t n, unsigned wc, unsigned wr, std::uint64_t seed,
                  const std::string& out_path) {
  LdpcCode code = construct_regular(n, wc, wr, seed);
  save_code(code, wc, wr, seed, out_path);
  std::cout << "wrote " << out_path << " (n=" << code.n << ", k=" << code.k
            << ", 4-cycles=" << count_4cycles(code.h) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDPC coding over forward/XOR relay networks"};
  app.require_subcommand(1);

  // ber
  auto* ber = app.add_subcommand("ber", "Monte-Carlo BER sweep");
  std::string config_path;
  ExperimentConfig flags;  // holds flag values; merged over --config
  std::vector<std::string> strategy_names;
  std::uint64_t seed_a = 0, seed_b = 0;
  ber->add_option("--config", config_path,
                  "JSON experiment config; explicit flags override it");
  auto* o_network = ber->add_option(
      "--network", flags.network, "butterfly, fig1, or topology JSON path");
  auto* o_plist =
      ber->add_option("--p-list", flags.p_values, "sweep crossover values")
          ->delimiter(',');
  auto* o_mult = ber->add_option("--mult-26", flags.mult_26,
                                 "crossover multiplier for link 2->6");
  auto* o_n = ber->add_option("--n", flags.n, "block length");
  auto* o_wc = ber->add_option("--wc", flags.wc, "column weight");
  auto* o_wr = ber->add_option("--wr", flags.wr, "row weight");
  auto* o_strat = ber->add_option("--strategies", strategy_names,
                                  "independent,serial,joint,extended")
                      ->delimiter(',');
  auto* o_iters = ber->add_option("--max-iters", flags.max_iters,
                                  "decoder iteration cap");
  auto* o_minerr = ber->add_option("--min-errors", flags.min_bit_errors,
                                   "stop a point once every strategy has this "
                                   "many errors on both streams");
  auto* o_maxfr =
      ber->add_option("--max-frames", flags.max_frames, "frame cap per point");
  auto* o_seed = ber->add_option("--seed", flags.master_seed, "master seed");
  auto* o_out = ber->add_option("--out", flags.out_path, "CSV path (default stdout)");
  auto* o_shared =
      ber->add_flag("--shared-code", flags.shared_code, "encode B with A's code");
  auto* o_seed_a = ber->add_option("--seed-a", seed_a, "code A construction seed");
  auto* o_seed_b = ber->add_option("--seed-b", seed_b, "code B construction seed");

  // regions
  auto* regions = app.add_subcommand(
      "regions", "achievable-rate boundaries and summaries as CSV");
  LinkParams lp{0.05, 0.05, 0.05, 0.05};
  std::size_t samples = 200;
  std::string regions_out;
  regions->add_option("--p13", lp.p13, "crossover of link 1->3");
  regions->add_option("--p23", lp.p23, "crossover of link 2->3");
  regions->add_option("--p34", lp.p34, "crossover of link 3->4");
  regions->add_option("--p14", lp.p14, "crossover of link 1->4");
  regions->add_option("--samples", samples, "boundary points per region");
  regions->add_option("--out", regions_out, "CSV path (default stdout)");

  // make-code
  auto* make_code = app.add_subcommand("make-code", "emit a code as alist");
  std::size_t mc_n = 500;
  unsigned mc_wc = 3, mc_wr = 6;
  std::uint64_t mc_seed = 1;
  std::string mc_out;
  make_code->add_option("--n", mc_n, "block length");
  make_code->add_option("--wc", mc_wc, "column weight");
  make_code->add_option("--wr", mc_wr, "row weight");
  make_code->add_option("--seed", mc_seed, "construction seed");
  make_code->add_option("--out", mc_out, "alist output path")->required();

  // verify
  auto* verify =
      app.add_subcommand("verify", "run the invariant self-check suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (ber->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty())
        cfg = ExperimentConfig::from_json_file(config_path);
      if (o_network->count()) cfg.network = flags.network;
      if (o_plist->count()) cfg.p_values = flags.p_values;
      if (o_mult->count()) cfg.mult_26 = flags.mult_26;
      if (o_n->count()) cfg.n = flags.n;
      if (o_wc->count()) cfg.wc = flags.wc;
      if (o_wr->count()) cfg.wr = flags.wr;
      if (o_strat->count()) {
        cfg.strategies.clear();
        for (const auto& name : strategy_names)
          cfg.strategies.push_back(strategy_from_string(name));
      }
      if (o_iters->count()) cfg.max_iters = flags.max_iters;
      if (o_minerr->count()) cfg.min_bit_errors = flags.min_bit_errors;
      if (o_maxfr->count()) cfg.max_frames = flags.max_frames;
      if (o_seed->count()) cfg.master_seed = flags.master_seed;
      if (o_out->count()) cfg.out_path = flags.out_path;
      if (o_shared->count()) cfg.shared_code = flags.shared_code;
      if (o_seed_a->count()) cfg.seed_a = seed_a;
      if (o_seed_b->count()) cfg.seed_b = seed_b;
      cfg.validate();
      return cmd_ber(cfg);
    }
    if (regions->parsed()) return cmd_regions(lp, samples, regions_out);
    if (make_code->parsed())
      return cmd_make_code(mc_n, mc_wc, mc_wr, mc_seed, mc_out);
    if (verify->parsed()) return run_verification(std::cout) ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
