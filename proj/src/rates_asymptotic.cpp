#include "ghzkey/rates_asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghzkey {

AsymptoticRate asymptotic_rate(Probability yield, const QberPair& qbers) {
  AsymptoticRate r;
  r.yield = yield;
  r.key_term = yield;
  r.check_penalty = yield * binary_entropy(qbers.q_z);
  r.ec_penalty = yield * binary_entropy(qbers.q_x);
  r.raw = r.key_term - r.check_penalty - r.ec_penalty;
  r.rate = std::max(r.raw, 0.0);
  return r;
}

AsymptoticRate asymptotic_rate(const NetworkConfig& cfg, const ProtocolSpec& spec,
                               const QberPair& qbers) {
  return asymptotic_rate(yields(cfg, spec), qbers);
}

AsymptoticRate hbb_rate(Probability q_x, Probability yield) {
  AsymptoticRate r;
  r.yield = yield;
  r.key_term = yield;
  r.ec_penalty = yield * binary_entropy(q_x);
  r.check_penalty = yield;
  r.raw = r.key_term - r.ec_penalty - r.check_penalty;
  r.rate = std::max(r.raw, 0.0);
  return r;
}

namespace {

double worst_bob_entropy(const std::vector<Probability>& q_z) {
  if (q_z.empty()) throw std::invalid_argument("need at least one Bob");
  double worst = 0.0;
  for (Probability q : q_z) worst = std::max(worst, binary_entropy(q).value);
  return worst;
}

}  // namespace

double qss_asymptotic_rate(Probability yield, const PerBobQbers& q) {
  const double secrecy = 1.0 - worst_bob_entropy(q.q_z);
  return yield * (secrecy - binary_entropy(q.q_x));
}

double cka_asymptotic_rate(Probability yield, const PerBobQbers& q) {
  const double leak_ec = yield * worst_bob_entropy(q.q_z);
  const double leak_pa = yield * binary_entropy(q.q_x);
  return yield - leak_pa - leak_ec;
}

bool cka_equals_qss_check(Probability yield, const PerBobQbers& qss_inputs,
                          const PerBobQbers& cka_inputs) {
  return std::abs(qss_asymptotic_rate(yield, qss_inputs) -
                  cka_asymptotic_rate(yield, cka_inputs)) < 1e-12;
}

}  // namespace ghzkey
