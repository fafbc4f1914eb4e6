#include "ghzkey/cli/commands.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ghzkey/density_oracle.hpp"
#include "ghzkey/parallel.hpp"

#ifndef GHZKEY_VERSION
#define GHZKEY_VERSION "0.0.0"
#endif

namespace ghzkey::cli {

namespace {

Cell opt_number(double v) {
  if (std::isnan(v)) return std::monostate{};
  return v;
}

const char* regime(const RunConfig& rc) { return rc.scenario.finite ? "finite" : "asymptotic"; }

std::vector<std::string> leading_columns(const Config& cfg) {
  const auto rc = cfg.resolve();
  if (!rc.sweep) return {};
  return {rc.sweep->label()};
}

std::vector<Cell> leading_cells(const Config& cfg, double x) {
  if (cfg.get("sweep.parameter").empty()) return {};
  return {x};
}

ResultTable new_table(const std::string& command, const Config& cfg,
                      std::vector<std::string> columns) {
  ResultTable t;
  t.metadata = metadata_lines(command, cfg);
  t.columns = leading_columns(cfg);
  t.columns.insert(t.columns.end(), columns.begin(), columns.end());
  return t;
}

std::vector<Cell> concat(std::vector<Cell> a, std::vector<Cell> b) {
  a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  return a;
}

/// Finite parameters as seen by one protocol: bipartite links split epsilon.
FiniteSizeParams protocol_fsp(const RunConfig& rc) {
  const auto& fsp = *rc.scenario.finite;
  if (rc.protocol.multipartite()) return fsp;
  return fsp.scaled_epsilon(static_cast<double>(rc.scenario.network.n_bobs()));
}

}  // namespace

const char* version() { return GHZKEY_VERSION; }

std::vector<std::string> metadata_lines(const std::string& command, const Config& cfg) {
  std::vector<std::string> out;
  out.push_back(std::string("ghzkey ") + version());
  out.push_back("command: " + command);
  out.push_back("seed: " + cfg.get("mc.seed"));
  for (const auto& [k, v] : cfg.entries()) out.push_back("config: " + k + "=" + v);
  return out;
}

std::vector<std::pair<double, RunConfig>> expand_sweep(const Config& cfg) {
  const auto base = cfg.resolve();
  if (!base.sweep) return {{std::nan(""), base}};
  std::vector<std::pair<double, RunConfig>> out;
  for (double x : base.sweep->values()) {
    Config at = cfg;
    for (const auto& key : base.sweep->keys) {
      double v = x;
      if (key == "network.N") v = std::round(x);
      at.set(key, format_number(v), "sweep");
    }
    out.emplace_back(x, at.resolve());
  }
  return out;
}

ResultTable run_rate(const Config& cfg) {
  auto t = new_table(
      "rate", cfg,
      {"family", "strategy", "memories", "regime", "N", "d_A_km", "d_B_km", "f_D", "yield", "q_x",
       "q_z", "alpha", "beta", "alpha_se", "beta_se", "p_key", "rate", "raw", "asymptotic_rate",
       "L", "m", "k", "k_i", "m_floor", "k_floor", "q_x_eff", "q_z_eff", "key_term", "ec_term",
       "log_term", "preshared_term", "ell", "aborted", "abort_reason"});
  const auto points = expand_sweep(cfg);
  const auto rows = parallel_map(
      points.size(),
      [&](std::size_t i) {
        const auto& [x, rc] = points[i];
        const auto& net = rc.scenario.network;
        const auto& spec = rc.protocol;
        const int n_eff = spec.multipartite() ? net.n_parties : 2;
        const auto model = model_qbers(rc.scenario, n_eff, spec.memories);
        const auto asym = asymptotic_rate(net, spec, model.qbers);
        std::vector<Cell> row{std::string(to_string(spec.family)),
                              std::string(to_string(spec.strategy)),
                              spec.memories,
                              std::string(regime(rc)),
                              static_cast<long long>(net.n_parties),
                              net.d_A_km,
                              net.d_B_km,
                              rc.scenario.noise.f_D.value(),
                              asym.yield,
                              model.qbers.q_x.value(),
                              model.qbers.q_z.value()};
        if (model.dephasing) {
          row.insert(row.end(), {model.dephasing->alpha, model.dephasing->beta,
                                 model.dephasing->alpha_se, model.dephasing->beta_se});
        } else {
          row.insert(row.end(), 4, std::monostate{});
        }
        if (!rc.scenario.finite) {
          row.insert(row.end(), {1.0, asym.rate, asym.raw, asym.rate});
          row.insert(row.end(), 15, std::monostate{});
          return concat(leading_cells(cfg, x), row);
        }
        const auto fsp = protocol_fsp(rc);
        KeyLengthResult res;
        double p = spec.p_key;
        if (rc.optimise_pkey) {
          const auto opt = optimize_protocol(net, spec, fsp, model.qbers, rc.scenario.pkey);
          res = opt.result;
          p = opt.p_star;
        } else {
          res = expected_key_length(net, spec, fsp, model.qbers);
        }
        const auto& tm = res.terms;
        row.insert(row.end(), {opt_number(p), res.secret_fraction,
                               tm.L > 0.0 ? res.raw / tm.L : 0.0, asym.rate, tm.L, tm.m, tm.k,
                               tm.k_i, std::floor(tm.m), std::floor(tm.k), tm.q_x_eff, tm.q_z_eff,
                               tm.key_term, tm.ec_term, tm.log_term, tm.preshared_term, res.ell,
                               res.aborted, res.abort_reason});
        return concat(leading_cells(cfg, x), row);
      },
      points.front().second.threads);
  for (auto r : rows) t.add_row(std::move(r));
  return t;
}

ResultTable run_sweep(const Config& cfg) {
  auto t = new_table("sweep", cfg,
                     {"N", "d_A_km", "d_B_km", "f_D", "memories", "regime", "family",
                      "multi_rate", "multi_raw", "multi_strategy", "multi_p_key", "q_x", "q_z",
                      "alpha_se", "beta_se", "bip_rate", "bip_raw", "bip_strategy",
                      "bip_memories", "bip_p_key", "ratio", "status"});
  const auto points = expand_sweep(cfg);
  if (!points.front().second.protocol.multipartite()) {
    throw ConfigError("protocol.family: sweep compares a multipartite family (mQSS or mCKA)");
  }
  const auto rows = parallel_map(
      points.size(),
      [&](std::size_t i) {
        const auto& [x, rc] = points[i];
        const auto p = evaluate_point(rc.scenario);
        const auto& net = rc.scenario.network;
        const bool finite = rc.scenario.finite.has_value();
        std::vector<Cell> row{static_cast<long long>(net.n_parties),
                              net.d_A_km,
                              net.d_B_km,
                              rc.scenario.noise.f_D.value(),
                              rc.scenario.memories,
                              std::string(regime(rc)),
                              std::string(to_string(rc.scenario.family)),
                              p.multi.rate,
                              p.multi.raw,
                              finite ? Cell(std::string(to_string(p.multi.strategy))) : Cell{},
                              finite ? opt_number(p.multi.p_key) : Cell{},
                              p.multi.model.qbers.q_x.value(),
                              p.multi.model.qbers.q_z.value()};
        if (p.multi.model.dephasing) {
          row.insert(row.end(), {p.multi.model.dephasing->alpha_se, p.multi.model.dephasing->beta_se});
        } else {
          row.insert(row.end(), 2, std::monostate{});
        }
        row.insert(row.end(),
                   {p.bip.rate, p.bip.raw,
                    finite ? Cell(std::string(to_string(p.bip.strategy))) : Cell{}, p.bip.memories,
                    finite ? opt_number(p.bip.p_key) : Cell{},
                    p.status == RatioStatus::ok ? Cell(p.ratio) : Cell{},
                    std::string(to_string(p.status))});
        return concat(leading_cells(cfg, x), row);
      },
      points.front().second.threads);
  for (auto r : rows) t.add_row(std::move(r));
  return t;
}

ResultTable run_threshold(const Config& cfg) {
  auto t = new_table("threshold", cfg,
                     {"N", "target", "regime", "family", "lo", "hi", "found", "value",
                      "transmission", "advantage_at_lo", "advantage_at_hi", "multi_rate",
                      "bip_rate", "reason"});
  const auto points = expand_sweep(cfg);
  if (!points.front().second.protocol.multipartite()) {
    throw ConfigError("protocol.family: threshold compares a multipartite family (mQSS or mCKA)");
  }
  const auto rows = parallel_map(
      points.size(),
      [&](std::size_t i) {
        const auto& [x, rc] = points[i];
        const auto r = find_threshold(rc.threshold, rc.scenario);
        const bool dist = rc.threshold.target == ThresholdTarget::distance;
        std::vector<Cell> row{static_cast<long long>(rc.threshold.n_parties),
                              std::string(dist ? "distance" : "noise"),
                              std::string(regime(rc)),
                              std::string(to_string(rc.scenario.family)),
                              rc.threshold.lo,
                              rc.threshold.hi,
                              r.found,
                              r.found ? Cell(r.value) : Cell{},
                              r.found && dist ? Cell(transmission(r.value).value()) : Cell{},
                              r.advantage_at_lo,
                              r.advantage_at_hi,
                              r.found ? Cell(r.multi_rate) : Cell{},
                              r.found ? Cell(r.bip_rate) : Cell{},
                              r.reason};
        return concat(leading_cells(cfg, x), row);
      },
      points.front().second.threads);
  for (auto r : rows) t.add_row(std::move(r));
  return t;
}

ResultTable run_optimize_pkey(const Config& cfg) {
  auto t = new_table("optimize-pkey", cfg,
                     {"family", "strategy", "memories", "N", "d_A_km", "d_B_km", "f_D",
                      "block_size", "L", "p_star", "indeterminate", "secret_fraction", "ell",
                      "m", "k", "aborted"});
  const auto points = expand_sweep(cfg);
  if (!points.front().second.scenario.finite) {
    throw ConfigError("finite.enabled: optimize-pkey needs finite.enabled = true");
  }
  const auto rows = parallel_map(
      points.size(),
      [&](std::size_t i) {
        const auto& [x, rc] = points[i];
        const auto& net = rc.scenario.network;
        const auto& spec = rc.protocol;
        const int n_eff = spec.multipartite() ? net.n_parties : 2;
        const auto model = model_qbers(rc.scenario, n_eff, spec.memories);
        const auto fsp = protocol_fsp(rc);
        const auto opt = optimize_protocol(net, spec, fsp, model.qbers, rc.scenario.pkey);
        const auto& r = opt.result;
        std::vector<Cell> row{std::string(to_string(spec.family)),
                              std::string(to_string(spec.strategy)),
                              spec.memories,
                              static_cast<long long>(net.n_parties),
                              net.d_A_km,
                              net.d_B_km,
                              rc.scenario.noise.f_D.value(),
                              fsp.block_size > 0.0 ? Cell(fsp.block_size) : Cell{},
                              r.terms.L,
                              opt_number(opt.p_star),
                              opt.indeterminate,
                              r.secret_fraction,
                              r.ell,
                              r.terms.m,
                              r.terms.k,
                              r.aborted};
        return concat(leading_cells(cfg, x), row);
      },
      points.front().second.threads);
  for (auto r : rows) t.add_row(std::move(r));
  return t;
}

OracleReport run_oracle_check(const OracleOptions& opts) {
  for (int n : opts.parties) {
    if (n < 2 || n > oracle::kMaxParties) {
      throw ConfigError("--parties: oracle supports N ≤ " + std::to_string(oracle::kMaxParties) +
                        " (got N = " + std::to_string(n) + ")");
    }
  }
  oracle::OracleGrid grid;
  grid.parties = opts.parties;
  grid.tolerance = opts.tolerance;
  const CorrectionTerm term = opts.term;
  const bool fault = opts.inject_b_sign_fault;
  oracle::AnalyticChain chain = [term, fault](std::span<const PairCoefficients> pairs,
                                              Probability f_D) -> QberPair {
    const auto ab = alpha_beta_closed_form(pairs);
    const int n = static_cast<int>(pairs.size()) + 1;
    auto pref = ghz_prefactors(ab.alpha, ab.beta, f_D, n, term);
    if (fault) pref.b -= 0.5 * f_D * pref.alpha;
    return memory_qbers(pref);
  };

  OracleReport rep;
  oracle::OracleGrid one = grid;
  for (int n : grid.parties) {
    for (double f : grid.f_D) {
      one.parties = {n};
      one.f_D = {f};
      std::vector<oracle::OracleCase> cases;
      try {
        cases = oracle::run_oracle_grid(one, chain);
      } catch (const std::domain_error& e) {
        ++rep.cases;
        ++rep.failures;
        rep.lines.push_back("FAIL oracle N=" + std::to_string(n) + " f_D=" + format_number(f) +
                            ": analytic chain " + e.what());
        continue;
      }
      int bad = 0;
      for (const auto& c : cases) {
        ++rep.cases;
        if (!c.pass) {
          ++bad;
          ++rep.failures;
          rep.lines.push_back("FAIL oracle " + c.describe());
        }
      }
      rep.lines.push_back(std::string(bad ? "FAIL" : "PASS") + " oracle N=" + std::to_string(n) +
                          " f_D=" + format_number(f) + " cases=" + std::to_string(cases.size()) +
                          " mismatches=" + std::to_string(bad));
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < opts.parity_draws; ++draw) {
    const int pairs = 1 + draw % opts.parity_max_pairs;
    std::vector<PairCoefficients> coeffs;
    const Probability f(0.3 * u(rng));
    for (int i = 0; i < pairs; ++i) coeffs.push_back(pair_coefficients(u(rng), u(rng), f));
    const auto closed = alpha_beta_closed_form(coeffs);
    const auto brute = oracle::alpha_beta_subset_sum(coeffs);
    auto rel_err = [](double got, double want) {
      return std::abs(got - want) / std::max(std::abs(want), 1e-300);
    };
    const double rel = std::max(rel_err(closed.alpha, brute.alpha), rel_err(closed.beta, brute.beta));
    worst = std::max(worst, rel);
    ++rep.cases;
  }
  const bool parity_ok = worst < 1e-12;
  if (!parity_ok) ++rep.failures;
  rep.lines.push_back(std::string(parity_ok ? "PASS" : "FAIL") + " parity draws=" +
                      std::to_string(opts.parity_draws) + " max_relative_error=" +
                      format_number(worst));
  return rep;
}

}  // namespace ghzkey::cli
