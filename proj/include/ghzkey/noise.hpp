#pragma once

#include <span>

#include "ghzkey/core_math.hpp"

namespace ghzkey {

/// Channel and memory noise parameters.
struct NoiseParams {
  Probability f_D{0.0};       // depolarization probability of one channel
  double T2_s = 1.0;          // memory dephasing time
  double Tp_s = 2e-6;         // Bell-pair preparation time
  double c_m_per_s = 2e8;     // light speed in fibre

  void validate() const;
};

/// Coefficients of one stored Bell pair (hub memory C~_i, Bob B_i).
///   A = (1 + e_B e_C)/2,  B = 1 - A
///   theta = (1 - f_D) A + f_D/4  (weight on Phi+)
///   phi   = (1 - f_D) B + f_D/4  (weight on Phi-)
/// Psi+ and Psi- each carry f_D/4.
struct PairCoefficients {
  double A = 1.0;
  double B = 0.0;
  double theta = 1.0;
  double phi = 0.0;
};

/// Expected even/odd dephasing-parity weights.
struct AlphaBeta {
  double alpha = 1.0;
  double beta = 0.0;
};

/// Weights of |psi_0^+> (a) and |psi_0^-> (b) in the GHZ-basis expansion of the
/// state shared by Alice and the Bobs, with the alpha/beta they came from.
struct GhzPrefactors {
  double a = 1.0;
  double b = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
};

/// q_x: collective X-basis error. q_z: Alice-vs-Bob Z-basis error (worst Bob).
struct QberPair {
  Probability q_x{0.0};
  Probability q_z{0.0};
};

/// Which form of the all-Bobs-flipped term enters a and b.
///  - derived:    2^(N-1) (f_D/4)^N. Matches exact density-operator simulation.
///  - as_printed: 2^(N-1) (f_D/4)^(N-1). Gives a + b > 1 at N = 2 for f_D > 0;
///                kept only so the discrepancy can be demonstrated.
enum class CorrectionTerm { derived, as_printed };

/// Memoryless channel QBER: q_x = q_z = (1 - (1 - f_D)^N) / 2.
QberPair memoryless_qber(Probability f_D, int n_parties);

/// exp_B = e^(-t_B/T2), exp_C = e^(-t_C/T2), both in [0, 1].
PairCoefficients pair_coefficients(double exp_B, double exp_C, Probability f_D);

/// alpha = (prod(theta+phi) + prod(theta-phi))/2, beta = (prod(theta+phi) - prod(theta-phi))/2.
/// Equal to the even/odd subset sums over the pairs.
AlphaBeta alpha_beta_closed_form(std::span<const PairCoefficients> pairs);

GhzPrefactors ghz_prefactors(double alpha, double beta, Probability f_D, int n_parties,
                             CorrectionTerm term = CorrectionTerm::derived);

/// q_x = (1 - a + b)/2, q_z = 1 - a - b. Values are clamped into [0, 1]; a
/// pre-clamp excursion beyond 1e-9 throws std::domain_error.
QberPair memory_qbers(const GhzPrefactors& pref);

/// Convenience chain for identical pairs with given exponents.
QberPair memory_qbers_for_pairs(std::span<const PairCoefficients> pairs, Probability f_D,
                                CorrectionTerm term = CorrectionTerm::derived);

}  // namespace ghzkey
