#pragma once

#include <string>
#include <vector>

#include "ghzkey/cli/config.hpp"
#include "ghzkey/cli/csv.hpp"
#include "ghzkey/noise.hpp"

namespace ghzkey::cli {

const char* version();

/// "# ..." header lines: tool version, command, seed and the full config.
std::vector<std::string> metadata_lines(const std::string& command, const Config& cfg);

/// One resolved config per sweep value (a single entry without a sweep).
std::vector<std::pair<double, RunConfig>> expand_sweep(const Config& cfg);

/// Evaluation of the configured protocol with its term breakdown.
ResultTable run_rate(const Config& cfg);
/// Multipartite against the optimal bipartite baseline along the sweep axis.
ResultTable run_sweep(const Config& cfg);
ResultTable run_threshold(const Config& cfg);
ResultTable run_optimize_pkey(const Config& cfg);

struct OracleOptions {
  std::vector<int> parties{2, 3};
  double tolerance = 1e-10;
  CorrectionTerm term = CorrectionTerm::derived;
  bool inject_b_sign_fault = false;  // flips the sign of the alpha term in b
  std::uint64_t seed = 1;
  int parity_draws = 100;
  int parity_max_pairs = 12;
};

struct OracleReport {
  int cases = 0;
  int failures = 0;
  std::vector<std::string> lines;
  bool passed() const { return failures == 0; }
};

/// Density-operator grid plus the subset-sum parity check. Throws ConfigError
/// for party counts the dense simulation does not support.
OracleReport run_oracle_check(const OracleOptions& opts);

struct ReproduceOptions {
  std::string figure;
  std::string out_dir = ".";
  bool quick = false;  // coarser grids, for smoke tests
};

const std::vector<std::string>& figure_ids();

/// Writes one CSV per panel plus <figure>_manifest.txt; returns the paths.
std::vector<std::string> run_reproduce(const ReproduceOptions& opts, const Config& base);

}  // namespace ghzkey::cli
