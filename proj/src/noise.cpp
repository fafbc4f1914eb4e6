#include "ghzkey/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzkey {

namespace {

constexpr double kClampSlack = 1e-9;

Probability clamp_checked(double v, const char* name) {
  if (v < -kClampSlack || v > 1.0 + kClampSlack) {
    throw std::domain_error(std::string(name) + " outside [0,1] before clamping: " +
                            std::to_string(v));
  }
  return Probability(std::min(1.0, std::max(0.0, v)));
}

}  // namespace

void NoiseParams::validate() const {
  if (!(T2_s > 0.0)) throw std::invalid_argument("T2 must be positive");
  if (!(Tp_s >= 0.0)) throw std::invalid_argument("Tp must be non-negative");
  if (!(c_m_per_s > 0.0)) throw std::invalid_argument("fibre light speed must be positive");
}

QberPair memoryless_qber(Probability f_D, int n_parties) {
  if (n_parties < 2) throw std::invalid_argument("need at least 2 parties");
  const double q = 0.5 * (1.0 - std::pow(1.0 - f_D, n_parties));
  return {Probability(q), Probability(q)};
}

PairCoefficients pair_coefficients(double exp_B, double exp_C, Probability f_D) {
  if (!(exp_B >= 0.0 && exp_B <= 1.0) || !(exp_C >= 0.0 && exp_C <= 1.0)) {
    throw std::invalid_argument("dephasing exponentials must lie in [0,1]");
  }
  const double f = f_D;
  PairCoefficients c;
  c.A = 0.5 * (1.0 + exp_B * exp_C);
  c.B = 1.0 - c.A;
  c.theta = (1.0 - f) * c.A + 0.25 * f;
  c.phi = (1.0 - f) * c.B + 0.25 * f;
  return c;
}

AlphaBeta alpha_beta_closed_form(std::span<const PairCoefficients> pairs) {
  if (pairs.empty()) throw std::invalid_argument("need at least one Bell pair");
  double sum_prod = 1.0;
  double diff_prod = 1.0;
  for (const auto& p : pairs) {
    sum_prod *= p.theta + p.phi;
    diff_prod *= p.theta - p.phi;
  }
  return {0.5 * (sum_prod + diff_prod), 0.5 * (sum_prod - diff_prod)};
}

GhzPrefactors ghz_prefactors(double alpha, double beta, Probability f_D, int n_parties,
                             CorrectionTerm term) {
  if (n_parties < 2) throw std::invalid_argument("need at least 2 parties");
  const double f = f_D;
  const double quarter = 0.25 * f;
  const int power = term == CorrectionTerm::derived ? n_parties : n_parties - 1;
  const double flipped = std::pow(2.0, n_parties - 1) * std::pow(quarter, power);
  GhzPrefactors g;
  g.alpha = alpha;
  g.beta = beta;
  g.a = (1.0 - 3.0 * quarter) * alpha + quarter * beta + flipped;
  g.b = (1.0 - 3.0 * quarter) * beta + quarter * alpha + flipped;
  return g;
}

QberPair memory_qbers(const GhzPrefactors& pref) {
  return {clamp_checked(0.5 * (1.0 - pref.a + pref.b), "Q_X"),
          clamp_checked(1.0 - pref.a - pref.b, "Q_Z")};
}

QberPair memory_qbers_for_pairs(std::span<const PairCoefficients> pairs, Probability f_D,
                                CorrectionTerm term) {
  const auto ab = alpha_beta_closed_form(pairs);
  const int n = static_cast<int>(pairs.size()) + 1;
  return memory_qbers(ghz_prefactors(ab.alpha, ab.beta, f_D, n, term));
}

}  // namespace ghzkey
