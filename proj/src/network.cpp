#include "ghzkey/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace ghzkey {

const char* to_string(Family f) {
  switch (f) {
    case Family::mQSS: return "mQSS";
    case Family::mCKA: return "mCKA";
    case Family::bQSS: return "bQSS";
    case Family::bCKA: return "bCKA";
  }
  return "?";
}

const char* to_string(BasisStrategy s) {
  return s == BasisStrategy::preshared ? "preshared" : "switching";
}

Family parse_family(const std::string& s) {
  if (s == "mQSS") return Family::mQSS;
  if (s == "mCKA") return Family::mCKA;
  if (s == "bQSS") return Family::bQSS;
  if (s == "bCKA") return Family::bCKA;
  throw std::invalid_argument("unknown protocol family '" + s + "' (expected mQSS|mCKA|bQSS|bCKA)");
}

BasisStrategy parse_strategy(const std::string& s) {
  if (s == "preshared") return BasisStrategy::preshared;
  if (s == "switching") return BasisStrategy::switching;
  throw std::invalid_argument("unknown basis strategy '" + s + "' (expected preshared|switching)");
}

bool is_multipartite(Family f) { return f == Family::mQSS || f == Family::mCKA; }

NetworkConfig NetworkConfig::symmetric(int n_parties, double d_km) {
  NetworkConfig c{n_parties, d_km, d_km};
  c.validate();
  return c;
}

NetworkConfig NetworkConfig::asymmetric(int n_parties, double d_A_km, double d_B_km) {
  NetworkConfig c{n_parties, d_A_km, d_B_km};
  c.validate();
  return c;
}

void NetworkConfig::validate() const {
  if (n_parties < 2) throw std::invalid_argument("network needs at least 2 parties");
  if (!(d_A_km >= 0.0) || !(d_B_km >= 0.0)) {
    throw std::invalid_argument("link distances must be non-negative");
  }
}

void ProtocolSpec::validate() const {
  if (family == Family::mQSS && strategy == BasisStrategy::preshared) {
    throw std::invalid_argument("mQSS cannot use a pre-shared basis key; use switching");
  }
}

Probability yields(const NetworkConfig& cfg, const ProtocolSpec& spec) {
  cfg.validate();
  const double pa = cfg.p_A();
  const double pb = cfg.p_B();
  const double links = static_cast<double>(cfg.n_bobs());
  if (spec.memories) {
    if (pa > pb) {
      throw std::invalid_argument("memory network requires p_A <= p_B (long link to Alice)");
    }
    return Probability(spec.multipartite() ? pa : pa / links);
  }
  if (spec.multipartite()) return Probability(pa * std::pow(pb, links));
  return Probability(pa * pb / links);
}

SiftingEfficiencies sifting(BasisStrategy strategy, Probability p_key, int n_parties,
                            CheckSiftingRule rule) {
  if (n_parties < 2) throw std::invalid_argument("sifting needs at least 2 parties");
  const double p = p_key;
  if (strategy == BasisStrategy::preshared) {
    return {p_key, p_key.complement()};
  }
  const double key = std::pow(p, n_parties);
  if (n_parties == 2) {
    return {Probability(key), Probability((1.0 - p) * (1.0 - p))};
  }
  const int exponent = rule == CheckSiftingRule::as_printed ? n_parties - 2 : n_parties - 1;
  return {Probability(key), Probability((1.0 - p) * (1.0 - std::pow(p, exponent)))};
}

SiftingEfficiencies sifting(const ProtocolSpec& spec, int n_parties) {
  const int parties = spec.multipartite() ? n_parties : 2;
  return sifting(spec.strategy, spec.p_key, parties, spec.check_rule);
}

ExpectedCounts expected_counts(const NetworkConfig& cfg, const ProtocolSpec& spec, double rounds) {
  if (!(rounds >= 1.0)) throw std::invalid_argument("number of rounds must be >= 1");
  const double y = yields(cfg, spec);
  const auto eta = sifting(spec, cfg.n_parties);
  ExpectedCounts c;
  c.m = eta.eta_key * y * rounds;
  c.k = eta.eta_check * y * rounds;
  if (spec.k_rule == CheckCountRule::global) {
    c.k_i = c.k;
  } else {
    const double q = 1.0 - spec.p_key;
    const double pair = spec.strategy == BasisStrategy::switching ? q * q : q;
    c.k_i = pair * y * rounds;
  }
  return c;
}

SiftingSample simulate_sifting(Probability p_key, int n_parties, std::uint64_t rounds,
                               std::uint64_t seed) {
  if (n_parties < 2) throw std::invalid_argument("sifting needs at least 2 parties");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = p_key;

  SiftingSample s;
  s.rounds = rounds;
  for (std::uint64_t r = 0; r < rounds; ++r) {
    const bool alice_key = unit(rng) < p;
    bool all_key = alice_key;
    bool any_bob_check = false;
    for (int b = 1; b < n_parties; ++b) {
      const bool key = unit(rng) < p;
      all_key = all_key && key;
      any_bob_check = any_bob_check || !key;
    }
    if (all_key) ++s.key_rounds;
    if (!alice_key && any_bob_check) ++s.check_rounds;
  }
  s.eta_key = static_cast<double>(s.key_rounds) / static_cast<double>(rounds);
  s.eta_check = static_cast<double>(s.check_rounds) / static_cast<double>(rounds);
  return s;
}

}  // namespace ghzkey
