#pragma once

#include <vector>

#include "ghzkey/network.hpp"
#include "ghzkey/noise.hpp"

namespace ghzkey {

/// Asymptotic secret bits per network use.
struct AsymptoticRate {
  double rate = 0.0;  // max(raw, 0)
  double raw = 0.0;
  double yield = 0.0;
  double key_term = 0.0;       // yield, the key is read off with probability one
  double check_penalty = 0.0;  // yield * h2(check-basis QBER)
  double ec_penalty = 0.0;     // yield * h2(key-basis QBER)
};

/// Y (1 - h2(q_x) - h2(q_z)). Shared by the multipartite and bipartite
/// variants; only the yield and the QBERs differ.
AsymptoticRate asymptotic_rate(Probability yield, const QberPair& qbers);

/// Same with the yield taken from the network and protocol (p_key = 1).
/// Bipartite families expect two-party QBERs.
AsymptoticRate asymptotic_rate(const NetworkConfig& cfg, const ProtocolSpec& spec,
                               const QberPair& qbers);

/// Y (1 - h2(q_x) - 1): the rate of the unmodified three-basis protocol,
/// where the Y-basis error is maximal.
AsymptoticRate hbb_rate(Probability q_x, Probability yield = Probability(1.0));

/// QBERs with one Z-basis entry per Bob.
struct PerBobQbers {
  Probability q_x;
  std::vector<Probability> q_z;
};

/// Y (1 - h2(Q_X) - max_j h2(Q_Z,j)), X basis carrying the shared secret.
double qss_asymptotic_rate(Probability yield, const PerBobQbers& q);
/// Key in Z: error correction against the worst Bob, privacy amplification
/// from the X-basis error.
double cka_asymptotic_rate(Probability yield, const PerBobQbers& q);

/// True iff the two rates agree to 1e-12.
bool cka_equals_qss_check(Probability yield, const PerBobQbers& qss_inputs,
                          const PerBobQbers& cka_inputs);

}  // namespace ghzkey
