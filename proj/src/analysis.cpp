#include "ghzkey/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ghzkey/parallel.hpp"

namespace ghzkey {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> coarse_grid(const PkeyOptions& opts) {
  std::vector<double> pts;
  for (int i = 1; i <= opts.grid_points; ++i) {
    pts.push_back(static_cast<double>(i) / (opts.grid_points + 1));
  }
  for (int i = 0; i < opts.tail_points; ++i) {
    const double u = -9.0 + (6.7 * i) / std::max(1, opts.tail_points - 1);
    pts.push_back(1.0 - std::pow(10.0, u));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

PkeyOptimum optimize_pkey(const std::function<double(double)>& objective,
                          const PkeyOptions& opts) {
  const auto pts = coarse_grid(opts);
  if (pts.empty()) throw std::invalid_argument("empty p_key grid");
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = objective(pts[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  double lo = best > 0 ? pts[best - 1] : 0.5 * pts[0];
  double hi = best + 1 < pts.size() ? pts[best + 1] : 0.5 * (1.0 + pts.back());
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && hi - lo > opts.tolerance; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  PkeyOptimum out{pts[best], best_val, false};
  const double x = f1 >= f2 ? x1 : x2;
  const double fx = std::max(f1, f2);
  if (fx > out.value) {
    out.p_star = x;
    out.value = fx;
  }
  if (!(out.value > 0.0)) {
    out.p_star = kNaN;
    out.value = 0.0;
    out.indeterminate = true;
  }
  return out;
}

ProtocolOptimum optimize_protocol(const NetworkConfig& cfg, const ProtocolSpec& spec,
                                  const FiniteSizeParams& fsp, const QberPair& qbers,
                                  const PkeyOptions& opts) {
  auto eval = [&](double p) {
    ProtocolSpec s = spec;
    s.p_key = Probability(p);
    return expected_key_length(cfg, s, fsp, qbers);
  };
  const auto opt = optimize_pkey([&](double p) { return eval(p).secret_fraction; }, opts);
  ProtocolOptimum out;
  out.p_star = opt.p_star;
  out.indeterminate = opt.indeterminate;
  // Keep the breakdown of an indeterminate point at a nominal p_key.
  out.result = eval(opt.indeterminate ? 0.5 : opt.p_star);
  return out;
}

QberModel model_qbers(const Scenario& s, int n_parties, bool memories) {
  QberModel m;
  if (!memories) {
    m.qbers = memoryless_qber(s.noise.f_D, n_parties);
    return m;
  }
  const auto cfg = NetworkConfig::asymmetric(n_parties, s.network.d_A_km, s.network.d_B_km);
  auto rng = seeded_rng(s.seed, static_cast<std::uint64_t>(n_parties));
  const auto est = memory_network_qbers(cfg, s.noise, s.mc_samples, rng, s.term);
  m.qbers = est.qbers;
  m.dephasing = est.dephasing;
  return m;
}

MultipartiteEval evaluate_multipartite(const Scenario& s) {
  if (!is_multipartite(s.family)) throw std::invalid_argument("scenario family must be mQSS or mCKA");
  const auto& cfg = s.network;
  cfg.validate();
  MultipartiteEval e;
  e.model = model_qbers(s, cfg.n_parties, s.memories);

  ProtocolSpec spec;
  spec.family = s.family;
  spec.memories = s.memories;
  spec.strategy = BasisStrategy::switching;
  spec.check_rule = s.check_rule;
  e.asymptotic = asymptotic_rate(cfg, spec, e.model.qbers);
  if (!s.finite) {
    e.rate = e.asymptotic.rate;
    e.raw = e.asymptotic.raw;
    return e;
  }

  std::vector<BasisStrategy> strategies{BasisStrategy::switching};
  if (s.family == Family::mCKA) strategies.push_back(BasisStrategy::preshared);
  bool first = true;
  for (auto strategy : strategies) {
    spec.strategy = strategy;
    const auto opt = optimize_protocol(cfg, spec, *s.finite, e.model.qbers, s.pkey);
    if (first || opt.result.secret_fraction > e.rate) {
      e.rate = opt.result.secret_fraction;
      e.raw = opt.result.terms.L > 0.0 ? opt.result.raw / opt.result.terms.L : 0.0;
      e.strategy = strategy;
      e.p_key = opt.p_star;
      e.indeterminate = opt.indeterminate;
      e.finite = opt.result;
      first = false;
    }
  }
  return e;
}

BipartiteEval evaluate_bipartite(const Scenario& s) {
  const auto& cfg = s.network;
  cfg.validate();
  const auto memoryless = model_qbers(s, 2, false).qbers;
  std::optional<QberPair> memory;
  if (s.memories) memory = model_qbers(s, 2, true).qbers;

  BipartiteEval e;
  if (s.finite) {
    const auto opt = bipartite_optimal(cfg, *s.finite, {memoryless, memory}, s.check_rule);
    const auto& r = opt.best.result;
    e.rate = r.secret_fraction;
    e.raw = r.terms.L > 0.0 ? r.raw / r.terms.L : 0.0;
    e.memories = opt.best.memories;
    e.strategy = opt.best.strategy;
    e.p_key = opt.best.p_key;
    e.qbers = e.memories ? *memory : memoryless;
    return e;
  }

  ProtocolSpec spec;
  spec.family = Family::bQSS;
  spec.memories = false;
  const auto plain = asymptotic_rate(cfg, spec, memoryless);
  e.rate = plain.rate;
  e.raw = plain.raw;
  e.qbers = memoryless;
  if (memory) {
    spec.memories = true;
    const auto with_mem = asymptotic_rate(cfg, spec, *memory);
    if (with_mem.raw > e.raw) {
      e.rate = with_mem.rate;
      e.raw = with_mem.raw;
      e.memories = true;
      e.qbers = *memory;
    }
  }
  return e;
}

const char* to_string(RatioStatus s) {
  switch (s) {
    case RatioStatus::ok: return "ok";
    case RatioStatus::both_zero: return "both zero";
    case RatioStatus::bipartite_dead: return "bipartite dead";
  }
  return "?";
}

PointEvaluation evaluate_point(const Scenario& s) {
  PointEvaluation p;
  p.n_parties = s.network.n_parties;
  p.multi = evaluate_multipartite(s);
  p.bip = evaluate_bipartite(s);
  if (p.bip.rate > 0.0) {
    p.ratio = p.multi.rate / p.bip.rate;
  } else if (p.multi.rate > 0.0) {
    p.ratio = std::numeric_limits<double>::infinity();
    p.status = RatioStatus::bipartite_dead;
  } else {
    p.ratio = kNaN;
    p.status = RatioStatus::both_zero;
  }
  return p;
}

AdvantageProfile advantage_profile(const Scenario& s, int n_max, unsigned threads) {
  if (n_max < 2) throw std::invalid_argument("N_max must be >= 2");
  AdvantageProfile prof;
  prof.points = parallel_map(
      static_cast<std::size_t>(n_max - 1),
      [&](std::size_t i) {
        Scenario at = s;
        at.network.n_parties = static_cast<int>(i) + 2;
        return evaluate_point(at);
      },
      threads);

  for (const auto& p : prof.points) {
    if (p.status == RatioStatus::ok && p.ratio > 1.0) prof.max_N_advantage = p.n_parties;
  }
  if (prof.points.front().status == RatioStatus::ok) {
    prof.max_N_linear = 2;
    for (std::size_t i = 1; i < prof.points.size(); ++i) {
      const auto& cur = prof.points[i];
      if (cur.status != RatioStatus::ok || !(cur.ratio > prof.points[i - 1].ratio)) break;
      prof.max_N_linear = cur.n_parties;
    }
  }
  return prof;
}

Scenario with_threshold_parameter(const ThresholdQuery& q, const Scenario& s, double x) {
  Scenario at = s;
  at.network.n_parties = q.n_parties;
  if (q.target == ThresholdTarget::distance) {
    at.network.d_A_km = x;
    if (q.symmetric_distance) at.network.d_B_km = x;
  } else {
    at.noise.f_D = Probability(x);
  }
  return at;
}

ThresholdResult find_threshold(const ThresholdQuery& q, const Scenario& s) {
  if (!(q.lo < q.hi)) throw std::invalid_argument("threshold bracket must satisfy lo < hi");
  auto advantage = [&](double x) {
    const auto p = evaluate_point(with_threshold_parameter(q, s, x));
    return p.multi.rate > p.bip.rate;
  };
  ThresholdResult r;
  r.advantage_at_lo = advantage(q.lo);
  r.advantage_at_hi = advantage(q.hi);
  if (r.advantage_at_lo == r.advantage_at_hi) {
    r.reason = "no threshold in bracket";
    return r;
  }
  double lo = q.lo;
  double hi = q.hi;
  for (int it = 0; it < 300 && hi - lo > q.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (advantage(mid) == r.advantage_at_lo ? lo : hi) = mid;
  }
  r.found = true;
  r.value = 0.5 * (lo + hi);
  const auto p = evaluate_point(with_threshold_parameter(q, s, r.value));
  r.multi_rate = p.multi.rate;
  r.bip_rate = p.bip.rate;
  return r;
}

}  // namespace ghzkey
