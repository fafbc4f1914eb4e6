#include "ghzkey/rates_finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ghzkey/analysis.hpp"

namespace ghzkey {

FiniteSizeParams FiniteSizeParams::scaled_epsilon(double factor) const {
  if (!(factor >= 1.0)) throw std::invalid_argument("epsilon scale factor must be >= 1");
  FiniteSizeParams out = *this;
  out.epsilon /= factor;
  out.eps_c /= factor;
  out.eps_PA /= factor;
  out.eps_PE /= factor;
  out.eps_EC /= factor;
  out.eps_rob /= factor;
  return out;
}

void FiniteSizeParams::validate() const {
  const bool have_L = L > 0.0;
  const bool have_m = block_size > 0.0;
  if (have_L == have_m) {
    throw std::invalid_argument("exactly one of finite.L and finite.block_size must be positive");
  }
  if (have_L && L < 1.0) throw std::invalid_argument("finite.L must be >= 1");
  for (double e : {epsilon, eps_c, eps_PA, eps_PE, eps_EC, eps_rob}) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("every epsilon must lie in (0,1)");
  }
}

FiniteSizeParams epsilon_budget(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  FiniteSizeParams f;
  f.epsilon = epsilon;
  f.eps_c = epsilon / 2.0;
  f.eps_PA = epsilon / 4.0;
  f.eps_PE = epsilon / 8.0;
  f.eps_EC = f.eps_c;
  f.eps_rob = f.eps_c;
  return f;
}

double xi1(double eps, double m) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("xi1: eps must lie in (0,1]");
  if (!(m > 0.0)) throw std::invalid_argument("xi1: m must be positive");
  return std::sqrt(std::log(1.0 / eps) / m);
}

double xi2(double eps, double m, double k) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("xi2: eps must lie in (0,1]");
  if (!(m > 0.0) || !(k > 0.0)) throw std::invalid_argument("xi2: m and k must be positive");
  return std::sqrt((m + k) * (k + 1.0) / (m * k * k) * std::log(1.0 / eps));
}

double total_rounds(const NetworkConfig& cfg, const ProtocolSpec& spec,
                    const FiniteSizeParams& fsp) {
  if (!fsp.block_mode()) return fsp.L;
  const double per_use = sifting(spec, cfg.n_parties).eta_key * yields(cfg, spec);
  if (!(per_use > 0.0)) return std::numeric_limits<double>::infinity();
  return fsp.block_size / per_use;
}

namespace {

/// Party count the key-length formula sees, and the share of the rounds one
/// key is built from.
struct FormulaView {
  int parties = 2;
  double rounds = 0.0;
};

FormulaView formula_view(const NetworkConfig& cfg, const ProtocolSpec& spec, double L) {
  if (spec.multipartite()) return {cfg.n_parties, L};
  return {2, L / static_cast<double>(cfg.n_bobs())};
}

KeyLengthResult abort_result(KeyLengthTerms terms) {
  KeyLengthResult r;
  r.terms = terms;
  r.aborted = true;
  r.abort_reason = "insufficient detections";
  return r;
}

void finish(KeyLengthResult& r, double eps_rob) {
  const auto& t = r.terms;
  r.raw = (1.0 - eps_rob) * (t.key_term - t.preshared_term - t.log_term);
  r.ell = std::max(r.raw, 0.0);
  r.secret_fraction = t.L > 0.0 && std::isfinite(t.L) ? r.ell / t.L : 0.0;
}

KeyLengthTerms counts(const NetworkConfig& cfg, const ProtocolSpec& spec,
                      const FiniteSizeParams& fsp) {
  KeyLengthTerms t;
  t.L = total_rounds(cfg, spec, fsp);
  if (!std::isfinite(t.L)) return t;
  const auto c = expected_counts(cfg, spec, t.L);
  t.m = c.m;
  t.k = c.k;
  t.k_i = c.k_i;
  return t;
}

}  // namespace

KeyLengthResult expected_key_length_cka(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                        const FiniteSizeParams& fsp, const QberPair& qbers) {
  spec.validate();
  if (spec.strategy != BasisStrategy::preshared) {
    throw std::invalid_argument("CKA key length needs a pre-shared basis key");
  }
  fsp.validate();
  auto t = counts(cfg, spec, fsp);
  if (t.m < 1.0 || t.k < 1.0) return abort_result(t);
  const auto view = formula_view(cfg, spec, t.L);
  const double nb = static_cast<double>(view.parties - 1);
  const double eps_z = fsp.eps_rob / std::sqrt(nb);
  t.q_x_eff = qbers.q_x + xi2(fsp.eps_PE, t.m, t.k);
  t.q_z_eff = qbers.q_z + xi1(eps_z, t.m);
  t.ec_term = t.m * binary_entropy_saturating(t.q_z_eff);
  t.key_term = t.m * (1.0 - binary_entropy_saturating(t.q_x_eff)) - t.ec_term;
  t.preshared_term = view.rounds * binary_entropy(spec.p_key);
  t.log_term = std::log2(nb / (2.0 * fsp.eps_c * fsp.eps_PA * fsp.eps_PA));
  KeyLengthResult r;
  r.terms = t;
  finish(r, fsp.eps_rob);
  return r;
}

KeyLengthResult expected_key_length_qss(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                        const FiniteSizeParams& fsp, const QberPair& qbers) {
  spec.validate();
  if (spec.strategy != BasisStrategy::switching) {
    throw std::invalid_argument("QSS key length needs active basis switching");
  }
  fsp.validate();
  auto t = counts(cfg, spec, fsp);
  if (t.m < 1.0 || t.k_i < 1.0) return abort_result(t);
  const auto view = formula_view(cfg, spec, t.L);
  const double nb = static_cast<double>(view.parties - 1);
  const double eps_z = fsp.eps_PE / std::sqrt(nb);
  t.q_z_eff = qbers.q_z + xi2(eps_z, t.m, t.k_i);
  t.q_x_eff = qbers.q_x + xi1(fsp.eps_rob, t.m);
  t.ec_term = t.m * binary_entropy_saturating(t.q_x_eff);
  t.key_term = t.m * (1.0 - binary_entropy_saturating(t.q_z_eff)) - t.ec_term;
  t.log_term = std::log2(nb / (2.0 * fsp.eps_EC * fsp.eps_PA * fsp.eps_PA));
  KeyLengthResult r;
  r.terms = t;
  finish(r, fsp.eps_rob);
  return r;
}

KeyLengthResult expected_key_length(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                    const FiniteSizeParams& fsp, const QberPair& qbers) {
  return spec.strategy == BasisStrategy::preshared
             ? expected_key_length_cka(cfg, spec, fsp, qbers)
             : expected_key_length_qss(cfg, spec, fsp, qbers);
}

BipartiteOptimum bipartite_optimal(const NetworkConfig& cfg, const FiniteSizeParams& fsp,
                                   const BipartiteQbers& qbers, CheckSiftingRule rule) {
  cfg.validate();
  const FiniteSizeParams link_fsp = fsp.scaled_epsilon(static_cast<double>(cfg.n_bobs()));
  BipartiteOptimum out;
  for (bool memories : {false, true}) {
    if (memories && !qbers.memory) continue;
    const QberPair& q = memories ? *qbers.memory : qbers.memoryless;
    for (auto strategy : {BasisStrategy::preshared, BasisStrategy::switching}) {
      ProtocolSpec spec;
      spec.family = strategy == BasisStrategy::preshared ? Family::bCKA : Family::bQSS;
      spec.memories = memories;
      spec.strategy = strategy;
      spec.check_rule = rule;
      auto opt = optimize_protocol(cfg, spec, link_fsp, q);
      BipartiteCandidate c;
      c.strategy = strategy;
      c.memories = memories;
      c.p_key = opt.p_star;
      c.indeterminate = opt.indeterminate;
      c.result = opt.result;
      out.candidates.push_back(c);
    }
  }
  out.best = out.candidates.front();
  for (const auto& c : out.candidates) {
    if (c.result.secret_fraction > out.best.result.secret_fraction) out.best = c;
  }
  return out;
}

}  // namespace ghzkey
