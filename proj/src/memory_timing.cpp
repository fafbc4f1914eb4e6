#include "ghzkey/memory_timing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghzkey {

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

TimingConfig trial_times(const NetworkConfig& cfg, const NoiseParams& noise) {
  cfg.validate();
  noise.validate();
  const double dA_m = cfg.d_A_km * 1e3;
  const double dB_m = cfg.d_B_km * 1e3;
  TimingConfig t;
  t.comm_B_s = 2.0 * dB_m / noise.c_m_per_s;
  t.tau_A_s = noise.Tp_s + dA_m / noise.c_m_per_s;
  t.tau_B_s = noise.Tp_s + t.comm_B_s;
  t.T2_s = noise.T2_s;
  return t;
}

std::vector<WaitingTime> waiting_times(const RoundSample& sample, const TimingConfig& timing) {
  std::vector<WaitingTime> out;
  out.reserve(sample.n_B.size());
  const double alice = static_cast<double>(sample.n_A) * timing.tau_A_s;
  for (auto nb : sample.n_B) {
    const double raw = alice - static_cast<double>(nb) * timing.tau_B_s;
    const double t = std::max(raw, 0.0) + timing.comm_B_s;
    out.push_back({t, t});
  }
  return out;
}

RoundSample sample_round(Probability p_A, Probability p_B, int n_parties, std::mt19937_64& rng) {
  if (p_A.value() <= 0.0 || p_B.value() <= 0.0) {
    throw std::invalid_argument("link success probability must be positive");
  }
  if (n_parties < 2) throw std::invalid_argument("need at least 2 parties");
  // std::geometric_distribution counts failures before the first success.
  std::geometric_distribution<std::uint64_t> alice(p_A.value());
  std::geometric_distribution<std::uint64_t> bob(p_B.value());
  RoundSample s;
  s.n_A = alice(rng) + 1;
  s.n_B.resize(static_cast<std::size_t>(n_parties - 1));
  for (auto& n : s.n_B) n = bob(rng) + 1;
  return s;
}

DephasingEstimate expected_alpha_beta(const NetworkConfig& cfg, const NoiseParams& noise,
                                      std::uint64_t samples, std::mt19937_64& rng) {
  if (samples < 1) throw std::invalid_argument("need at least one Monte Carlo sample");
  const auto timing = trial_times(cfg, noise);
  const auto pA = cfg.p_A();
  const auto pB = cfg.p_B();

  // Welford accumulators.
  double mean_a = 0.0, m2_a = 0.0, mean_b = 0.0, m2_b = 0.0;
  std::uint64_t clamped = 0;
  std::vector<PairCoefficients> pairs(static_cast<std::size_t>(cfg.n_bobs()));

  for (std::uint64_t s = 0; s < samples; ++s) {
    const auto round = sample_round(pA, pB, cfg.n_parties, rng);
    const auto waits = waiting_times(round, timing);
    const double alice = static_cast<double>(round.n_A) * timing.tau_A_s;
    for (std::size_t i = 0; i < waits.size(); ++i) {
      if (alice < static_cast<double>(round.n_B[i]) * timing.tau_B_s) ++clamped;
      const double eB = std::exp(-waits[i].t_B_s / timing.T2_s);
      const double eC = std::exp(-waits[i].t_C_s / timing.T2_s);
      pairs[i] = pair_coefficients(eB, eC, noise.f_D);
    }
    const auto ab = alpha_beta_closed_form(pairs);
    const double n = static_cast<double>(s + 1);
    const double da = ab.alpha - mean_a;
    mean_a += da / n;
    m2_a += da * (ab.alpha - mean_a);
    const double db = ab.beta - mean_b;
    mean_b += db / n;
    m2_b += db * (ab.beta - mean_b);
  }

  DephasingEstimate e;
  e.alpha = mean_a;
  e.beta = mean_b;
  e.samples = samples;
  e.clamped_waits = clamped;
  if (samples > 1) {
    const double n = static_cast<double>(samples);
    e.alpha_se = std::sqrt(m2_a / (n - 1.0) / n);
    e.beta_se = std::sqrt(m2_b / (n - 1.0) / n);
  }
  return e;
}

MemoryQberEstimate memory_network_qbers(const NetworkConfig& cfg, const NoiseParams& noise,
                                        std::uint64_t samples, std::mt19937_64& rng,
                                        CorrectionTerm term) {
  MemoryQberEstimate out;
  out.dephasing = expected_alpha_beta(cfg, noise, samples, rng);
  out.prefactors =
      ghz_prefactors(out.dephasing.alpha, out.dephasing.beta, noise.f_D, cfg.n_parties, term);
  out.qbers = memory_qbers(out.prefactors);
  return out;
}

}  // namespace ghzkey
