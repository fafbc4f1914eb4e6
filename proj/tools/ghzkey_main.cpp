#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghzkey/cli/commands.hpp"

namespace {

using namespace ghzkey::cli;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("-c,--config", args.config_path, "key = value configuration file");
  sub->add_option("-s,--set", args.overrides, "override one key, e.g. --set noise.f_D=0.02");
  sub->add_option("-o,--output", args.output, "CSV output path (default: output.path or stdout)");
}

Config load(const CommonArgs& args) {
  Config cfg;
  if (!args.config_path.empty()) cfg.load_file(args.config_path);
  for (const auto& o : args.overrides) cfg.apply_override(o);
  if (!args.output.empty()) cfg.set("output.path", args.output, "--output");
  return cfg;
}

void emit(const Config& cfg, const ResultTable& t) {
  const auto& path = cfg.get("output.path");
  if (path.empty()) {
    write_csv(std::cout, t);
  } else {
    write_csv_file(path, t);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GHZ-based secret sharing and conference key rates over bottleneck networks"};
  app.set_version_flag("--version", std::string("ghzkey ") + version());
  app.require_subcommand(1);

  CommonArgs rate_args, sweep_args, thr_args, opt_args, repro_args;
  auto* rate = app.add_subcommand("rate", "evaluate the configured protocol");
  add_common(rate, rate_args);
  auto* sweep = app.add_subcommand("sweep", "multipartite vs optimal bipartite along sweep.*");
  add_common(sweep, sweep_args);
  auto* thr = app.add_subcommand("threshold", "noise or distance where the advantage ends");
  add_common(thr, thr_args);
  auto* opt = app.add_subcommand("optimize-pkey", "optimal key-basis probability (finite size)");
  add_common(opt, opt_args);

  auto* repro = app.add_subcommand("reproduce", "regenerate the tables behind a figure");
  std::string figure;
  std::string out_dir = ".";
  bool quick = false;
  repro->add_option("figure", figure, "figure id")->required()->check(CLI::IsMember(figure_ids()));
  repro->add_option("-d,--out-dir", out_dir, "directory for CSVs and the manifest");
  repro->add_flag("--quick", quick, "coarse grids");
  repro->add_option("-c,--config", repro_args.config_path, "base configuration (mc.*, run.threads)");
  repro->add_option("-s,--set", repro_args.overrides, "override one base key");

  auto* orc = app.add_subcommand("oracle-check", "density-operator and parity cross-checks");
  OracleOptions oopts;
  std::string term = "derived";
  orc->add_option("--parties", oopts.parties, "party counts to simulate")->delimiter(',');
  orc->add_option("--tolerance", oopts.tolerance, "absolute QBER tolerance");
  orc->add_option("--correction-term", term, "derived or as_printed")
      ->check(CLI::IsMember({"derived", "as_printed"}));
  orc->add_flag("--inject-b-sign-fault", oopts.inject_b_sign_fault,
                "flip the sign of one term of b (the check must then fail)");
  orc->add_option("--seed", oopts.seed, "seed for the parity draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*rate) {
      const auto cfg = load(rate_args);
      emit(cfg, run_rate(cfg));
    } else if (*sweep) {
      const auto cfg = load(sweep_args);
      emit(cfg, run_sweep(cfg));
    } else if (*thr) {
      const auto cfg = load(thr_args);
      emit(cfg, run_threshold(cfg));
    } else if (*opt) {
      const auto cfg = load(opt_args);
      emit(cfg, run_optimize_pkey(cfg));
    } else if (*repro) {
      const auto cfg = load(repro_args);
      for (const auto& f : run_reproduce({figure, out_dir, quick}, cfg)) std::cout << f << '\n';
    } else if (*orc) {
      oopts.term = term == "as_printed" ? ghzkey::CorrectionTerm::as_printed
                                        : ghzkey::CorrectionTerm::derived;
      const auto rep = run_oracle_check(oopts);
      for (const auto& line : rep.lines) std::cout << line << '\n';
      std::cout << (rep.passed() ? "oracle-check: PASS" : "oracle-check: FAIL") << " cases="
                << rep.cases << " failures=" << rep.failures << '\n';
      return rep.passed() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
