#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghzkey/network.hpp"
#include "ghzkey/noise.hpp"

namespace ghzkey {

/// Finite-size parameters. Exactly one of `L` (total network uses) and
/// `block_size` (expected key detections E[m]) is positive; in block-size
/// mode L is solved per protocol from L = E[m] / (eta_key Y).
struct FiniteSizeParams {
  double L = 0.0;
  double block_size = 0.0;
  double epsilon = 1e-10;
  double eps_c = 5e-11;
  double eps_PA = 2.5e-11;
  double eps_PE = 1.25e-11;
  double eps_EC = 5e-11;
  double eps_rob = 5e-11;
  std::uint64_t mc_samples = 1000;
  std::uint64_t seed = 1;

  bool block_mode() const { return block_size > 0.0; }
  /// Copy with every epsilon divided by `factor`.
  FiniteSizeParams scaled_epsilon(double factor) const;
  void validate() const;
};

/// eps_c = eps/2, eps_PA = eps/4, eps_PE = eps/8; eps_EC and eps_rob follow
/// eps_c. Size fields are left at zero.
FiniteSizeParams epsilon_budget(double epsilon);

/// sqrt(ln(1/eps) / m)
double xi1(double eps, double m);
/// sqrt((m + k)(k + 1) / (m k^2) ln(1/eps))
double xi2(double eps, double m, double k);

struct KeyLengthTerms {
  double L = 0.0;      // network uses behind the key
  double m = 0.0;      // expected key detections
  double k = 0.0;      // expected check detections
  double k_i = 0.0;    // per-Bob check detections
  double q_x_eff = 0.0;
  double q_z_eff = 0.0;
  double key_term = 0.0;        // m (1 - h - h)
  double ec_term = 0.0;         // m h2(error-correction QBER)
  double log_term = 0.0;        // log2((N-1) / (2 eps eps_PA^2))
  double preshared_term = 0.0;  // L h2(p_key), CKA only
};

struct KeyLengthResult {
  double ell = 0.0;  // clamped at zero
  double raw = 0.0;
  double secret_fraction = 0.0;  // ell / L
  KeyLengthTerms terms;
  bool aborted = false;
  std::string abort_reason;
};

/// Network uses needed for the protocol to collect `block_size` key
/// detections, or fsp.L outside block-size mode.
double total_rounds(const NetworkConfig& cfg, const ProtocolSpec& spec, const FiniteSizeParams& fsp);

/// Pre-shared basis key (Z key, X check). Requires strategy = preshared.
/// Bipartite families evaluate one link with two-party formulas over L/(N-1)
/// uses; the caller scales epsilon for the link.
KeyLengthResult expected_key_length_cka(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                        const FiniteSizeParams& fsp, const QberPair& qbers);

/// Active basis switching (X key, Z check). Requires strategy = switching.
KeyLengthResult expected_key_length_qss(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                        const FiniteSizeParams& fsp, const QberPair& qbers);

/// Dispatches on spec.strategy.
KeyLengthResult expected_key_length(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                    const FiniteSizeParams& fsp, const QberPair& qbers);

/// Two-party QBERs of each bipartite link. `memory` is absent for a
/// memoryless network.
struct BipartiteQbers {
  QberPair memoryless;
  std::optional<QberPair> memory;
};

struct BipartiteCandidate {
  BasisStrategy strategy = BasisStrategy::switching;
  bool memories = false;
  double p_key = 0.0;
  bool indeterminate = false;
  KeyLengthResult result;
};

struct BipartiteOptimum {
  BipartiteCandidate best;
  std::vector<BipartiteCandidate> candidates;
};

/// Best bipartite baseline for cfg.n_parties players: both strategies with
/// epsilon / (N - 1), with and without memories when memory QBERs are given,
/// p_key optimised separately for each.
BipartiteOptimum bipartite_optimal(const NetworkConfig& cfg, const FiniteSizeParams& fsp,
                                   const BipartiteQbers& qbers,
                                   CheckSiftingRule rule = CheckSiftingRule::as_printed);

}  // namespace ghzkey
