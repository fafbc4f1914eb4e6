#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ghzkey/memory_timing.hpp"
#include "ghzkey/network.hpp"
#include "ghzkey/noise.hpp"
#include "ghzkey/rates_asymptotic.hpp"
#include "ghzkey/rates_finite.hpp"

namespace ghzkey {

struct PkeyOptions {
  int grid_points = 200;     // uniform interior grid on (0, 1)
  int tail_points = 60;      // extra points 1 - 10^u, u in [-9, -2.3]
  double tolerance = 1e-9;   // golden-section bracket width
};

struct PkeyOptimum {
  double p_star = 0.0;  // NaN when indeterminate
  double value = 0.0;
  bool indeterminate = false;
};

/// Maximises objective(p) over p in (0, 1): coarse grid, then golden-section
/// between the neighbours of the best grid point. Never returns less than the
/// grid maximum. An objective that is nowhere positive is indeterminate.
PkeyOptimum optimize_pkey(const std::function<double(double)>& objective,
                          const PkeyOptions& opts = {});

struct ProtocolOptimum {
  double p_star = 0.0;
  bool indeterminate = false;
  KeyLengthResult result;
};

/// p_key maximising the secret fraction of one protocol.
ProtocolOptimum optimize_protocol(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                  const FiniteSizeParams& fsp, const QberPair& qbers,
                                  const PkeyOptions& opts = {});

/// Everything needed to compare a multipartite protocol with its bipartite
/// baseline. network.n_parties is overridden by the sweeps below.
struct Scenario {
  NetworkConfig network;
  NoiseParams noise;
  bool memories = false;
  Family family = Family::mQSS;
  std::optional<FiniteSizeParams> finite;  // asymptotic when empty
  std::uint64_t mc_samples = 1000;
  std::uint64_t seed = 1;
  CorrectionTerm term = CorrectionTerm::derived;
  CheckSiftingRule check_rule = CheckSiftingRule::as_printed;
  PkeyOptions pkey;
};

struct QberModel {
  QberPair qbers;
  std::optional<DephasingEstimate> dephasing;  // memory networks only
};

/// QBERs of an n-party distribution, from the memory chain (Monte Carlo,
/// stream n of the scenario seed) or the memoryless formula.
QberModel model_qbers(const Scenario& s, int n_parties, bool memories);

struct MultipartiteEval {
  QberModel model;
  double rate = 0.0;  // bits per use (asymptotic) or secret fraction (finite)
  double raw = 0.0;
  BasisStrategy strategy = BasisStrategy::switching;
  double p_key = 1.0;
  bool indeterminate = false;
  AsymptoticRate asymptotic;
  std::optional<KeyLengthResult> finite;
};

/// mQSS uses basis switching; mCKA takes the better of the pre-shared key
/// and basis switching.
MultipartiteEval evaluate_multipartite(const Scenario& s);

struct BipartiteEval {
  double rate = 0.0;
  double raw = 0.0;
  bool memories = false;
  BasisStrategy strategy = BasisStrategy::switching;
  double p_key = 1.0;
  QberPair qbers;
};

/// Optimal bipartite baseline at the scenario's N; with memories enabled the
/// memoryless links are also considered.
BipartiteEval evaluate_bipartite(const Scenario& s);

enum class RatioStatus { ok, both_zero, bipartite_dead };
const char* to_string(RatioStatus s);

struct PointEvaluation {
  int n_parties = 0;
  MultipartiteEval multi;
  BipartiteEval bip;
  double ratio = 0.0;
  RatioStatus status = RatioStatus::ok;
};

PointEvaluation evaluate_point(const Scenario& s);

struct AdvantageProfile {
  std::vector<PointEvaluation> points;  // N = 2..N_max
  int max_N_linear = 0;      // ratio strictly increasing from N = 2 up to here
  int max_N_advantage = 0;   // largest N with ratio > 1; 0 if none
};

AdvantageProfile advantage_profile(const Scenario& s, int n_max, unsigned threads = 0);

enum class ThresholdTarget { noise, distance };

struct ThresholdQuery {
  ThresholdTarget target = ThresholdTarget::distance;
  int n_parties = 3;
  /// Distance target: d_A = x and, if set, d_B = x as well. Noise target:
  /// f_D = x with the scenario's distances.
  bool symmetric_distance = true;
  double lo = 0.0;
  double hi = 200.0;
  double tolerance = 1e-12;
};

struct ThresholdResult {
  bool found = false;
  double value = 0.0;
  std::string reason;  // "no threshold in bracket" when not found
  bool advantage_at_lo = false;
  bool advantage_at_hi = false;
  double multi_rate = 0.0;  // at value
  double bip_rate = 0.0;
};

/// Bisection on the sign of (multipartite - bipartite) rate.
ThresholdResult find_threshold(const ThresholdQuery& q, const Scenario& s);

/// The scenario with the threshold parameter set to x.
Scenario with_threshold_parameter(const ThresholdQuery& q, const Scenario& s, double x);

}  // namespace ghzkey
