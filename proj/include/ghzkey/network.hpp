#pragma once

#include <cstdint>
#include <string>

#include "ghzkey/core_math.hpp"

namespace ghzkey {

enum class Family { mQSS, mCKA, bQSS, bCKA };
enum class BasisStrategy { preshared, switching };

/// How check rounds are counted for active basis switching with N >= 3.
///  - as_printed:         (1 - p)(1 - p^(N-2))
///  - alice_and_any_bob:  (1 - p)(1 - p^(N-1)), the probability that Alice and
///                        at least one of the N-1 Bobs pick the check basis.
enum class CheckSiftingRule { as_printed, alice_and_any_bob };

/// Whether the per-Bob check count k_i is the global check count (default) or
/// the number of rounds in which Alice and that particular Bob both checked.
enum class CheckCountRule { global, per_pair };

const char* to_string(Family f);
const char* to_string(BasisStrategy s);
Family parse_family(const std::string& s);
BasisStrategy parse_strategy(const std::string& s);

bool is_multipartite(Family f);

/// Single-bottleneck star: Alice -- hub over d_A, hub -- each Bob over d_B.
struct NetworkConfig {
  int n_parties = 3;  // Alice plus N-1 Bobs
  double d_A_km = 0.0;
  double d_B_km = 0.0;

  static NetworkConfig symmetric(int n_parties, double d_km);
  static NetworkConfig asymmetric(int n_parties, double d_A_km, double d_B_km);

  Probability p_A() const { return transmission(d_A_km); }
  Probability p_B() const { return transmission(d_B_km); }
  int n_bobs() const { return n_parties - 1; }

  void validate() const;
};

struct ProtocolSpec {
  Family family = Family::mQSS;
  bool memories = false;
  BasisStrategy strategy = BasisStrategy::switching;
  Probability p_key{1.0};
  CheckSiftingRule check_rule = CheckSiftingRule::as_printed;
  CheckCountRule k_rule = CheckCountRule::global;

  bool multipartite() const { return is_multipartite(family); }
  /// Throws for mQSS with a pre-shared basis key: the players must not learn
  /// the round type in advance.
  void validate() const;
};

struct SiftingEfficiencies {
  Probability eta_key;
  Probability eta_check;
};

/// Transmission success probability per network use, without basis sifting.
///   memoryless: multipartite p_A p_B^(N-1), bipartite p_A p_B / (N-1)
///   memories:   multipartite p_A,           bipartite p_A / (N-1)
/// The memory case requires p_A <= p_B.
Probability yields(const NetworkConfig& cfg, const ProtocolSpec& spec);

/// Sifting for an n-party round with the given strategy.
SiftingEfficiencies sifting(BasisStrategy strategy, Probability p_key, int n_parties,
                            CheckSiftingRule rule = CheckSiftingRule::as_printed);

/// Sifting for a protocol family. Bipartite families sift as two-party links.
SiftingEfficiencies sifting(const ProtocolSpec& spec, int n_parties);

struct ExpectedCounts {
  double m = 0.0;    // key detections
  double k = 0.0;    // check detections
  double k_i = 0.0;  // check detections per Bob
};

/// Expected detections over L network uses. The yield is the per-network-use
/// value from yields(); for bipartite families it already carries the 1/(N-1)
/// share each link receives.
ExpectedCounts expected_counts(const NetworkConfig& cfg, const ProtocolSpec& spec, double rounds);

struct SiftingSample {
  std::uint64_t rounds = 0;
  std::uint64_t key_rounds = 0;
  std::uint64_t check_rounds = 0;
  double eta_key = 0.0;
  double eta_check = 0.0;
};

/// Monte Carlo of independent per-party basis choices under active switching.
/// A key round needs every party in the key basis; a check round needs Alice
/// and at least one Bob in the check basis.
SiftingSample simulate_sifting(Probability p_key, int n_parties, std::uint64_t rounds,
                               std::uint64_t seed);

}  // namespace ghzkey
