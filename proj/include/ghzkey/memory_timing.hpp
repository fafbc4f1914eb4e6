#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ghzkey/network.hpp"
#include "ghzkey/noise.hpp"

namespace ghzkey {

/// Trial periods of the memory-assisted network, in seconds.
struct TimingConfig {
  double tau_A_s = 0.0;   // T_p + d_A / c
  double tau_B_s = 0.0;   // T_p + 2 d_B / c
  double comm_B_s = 0.0;  // 2 d_B / c
  double T2_s = 1.0;
};

/// Trial index (1-based) at which each link first succeeded.
struct RoundSample {
  std::uint64_t n_A = 1;
  std::vector<std::uint64_t> n_B;
};

/// Storage time of Bob's memory (t_B) and of the hub memory (t_C) for one pair.
struct WaitingTime {
  double t_B_s = 0.0;
  double t_C_s = 0.0;
};

struct DephasingEstimate {
  double alpha = 1.0;
  double beta = 0.0;
  double alpha_se = 0.0;  // standard error of the mean
  double beta_se = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t clamped_waits = 0;  // pairs whose raw waiting time was negative
};

/// Deterministic generator for a (seed, stream) pair. Distinct streams give
/// independent sequences for the same seed.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0);

TimingConfig trial_times(const NetworkConfig& cfg, const NoiseParams& noise);

/// Per Bob: max(n_A tau_A - n_B tau_B, 0) + 2 d_B / c for both memories.
std::vector<WaitingTime> waiting_times(const RoundSample& sample, const TimingConfig& timing);

RoundSample sample_round(Probability p_A, Probability p_B, int n_parties, std::mt19937_64& rng);

/// Monte Carlo mean of (alpha, beta) over `samples` network rounds.
DephasingEstimate expected_alpha_beta(const NetworkConfig& cfg, const NoiseParams& noise,
                                      std::uint64_t samples, std::mt19937_64& rng);

struct MemoryQberEstimate {
  QberPair qbers;
  GhzPrefactors prefactors;
  DephasingEstimate dephasing;
};

/// expected_alpha_beta followed by the prefactor and QBER formulas.
MemoryQberEstimate memory_network_qbers(const NetworkConfig& cfg, const NoiseParams& noise,
                                        std::uint64_t samples, std::mt19937_64& rng,
                                        CorrectionTerm term = CorrectionTerm::derived);

}  // namespace ghzkey
