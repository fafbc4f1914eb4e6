#include "ghzkey/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "ghzkey/parallel.hpp"

namespace ghzkey::cli {

namespace {

namespace fs = std::filesystem;

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Files written for one figure plus the lines of its manifest.
struct Output {
  std::string dir;
  std::string figure;
  std::vector<std::string> files;
  std::vector<std::string> manifest;

  void write(const std::string& name, const ResultTable& t) {
    const auto path = (fs::path(dir) / name).string();
    write_csv_file(path, t);
    files.push_back(path);
    manifest.push_back("file = " + name);
  }
  void note(const std::string& line) { manifest.push_back(line); }
};

Config with(const Config& base, const Settings& settings, const std::string& origin) {
  Config c = base;
  for (const auto& [k, v] : settings) c.set(k, v, origin);
  return c;
}

/// Appends rows, prefixing each with `lead`. Columns and metadata come from
/// the first table appended.
void append(ResultTable& dst, const ResultTable& src, const std::vector<std::string>& lead_names,
            const std::vector<Cell>& lead) {
  if (dst.columns.empty()) {
    dst.metadata = src.metadata;
    dst.columns = lead_names;
    dst.columns.insert(dst.columns.end(), src.columns.begin(), src.columns.end());
  }
  for (const auto& r : src.rows) {
    std::vector<Cell> row = lead;
    row.insert(row.end(), r.begin(), r.end());
    dst.add_row(std::move(row));
  }
}

std::vector<double> block_sizes(bool quick) {
  std::vector<double> m;
  const int per_decade = quick ? 1 : 4;
  for (int i = 0; i <= 8 * per_decade; ++i) {
    m.push_back(std::pow(10.0, 4.0 + static_cast<double>(i) / per_decade));
  }
  return m;
}

Cell p_cell(double p) {
  if (std::isnan(p)) return std::monostate{};
  return p;
}

void fig2(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: symmetric network, channel depolarization 2 %, mQSS solid vs bQSS dashed");
  out.note("chosen: N in {3,4,5,6}; distance 0..40 km (no grid given)");
  ResultTable t;
  for (int n : {3, 4, 5, 6}) {
    const auto c = with(base,
                        {{"network.N", std::to_string(n)},
                         {"noise.f_D", "0.02"},
                         {"memory.enabled", "false"},
                         {"finite.enabled", "false"},
                         {"protocol.family", "mQSS"},
                         {"sweep.parameter", "network.d_A_km+network.d_B_km"},
                         {"sweep.from", "0"},
                         {"sweep.to", "40"},
                         {"sweep.steps", o.quick ? "5" : "81"}},
                        "fig2");
    append(t, run_sweep(c), {}, {});
  }
  out.write("fig2_rates_vs_distance.csv", t);
}

void fig3(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: asymptotic advantage thresholds on f_D (top) and on link distance d (bottom), symmetric network");
  out.note("chosen: noise thresholds at d = 0 km and d = 4 km; distance thresholds at f_D = 0 and f_D = 0.01 (neither given)");
  const std::string n_to = o.quick ? "5" : "20";
  const std::string steps = o.quick ? "3" : "18";
  for (const char* d : {"0", "4"}) {
    const auto c = with(base,
                        {{"network.d_A_km", d}, {"network.d_B_km", d}, {"memory.enabled", "false"},
                         {"finite.enabled", "false"}, {"threshold.target", "noise"},
                         {"threshold.lo", "0"}, {"threshold.hi", "0.5"},
                         {"sweep.parameter", "network.N"}, {"sweep.from", "3"},
                         {"sweep.to", n_to}, {"sweep.steps", steps}},
                        "fig3");
    out.write(std::string("fig3_noise_threshold_d") + d + "km.csv", run_threshold(c));
  }
  for (const char* f : {"0", "0.01"}) {
    const auto c = with(base,
                        {{"noise.f_D", f}, {"memory.enabled", "false"}, {"finite.enabled", "false"},
                         {"threshold.target", "distance"}, {"threshold.symmetric", "true"},
                         {"threshold.lo", "0"}, {"threshold.hi", "200"},
                         {"sweep.parameter", "network.N"}, {"sweep.from", "3"},
                         {"sweep.to", n_to}, {"sweep.steps", steps}},
                        "fig3");
    out.write(std::string("fig3_distance_threshold_f") + f + ".csv", run_threshold(c));
  }
}

ResultTable profile_summary(const std::vector<std::tuple<std::string, Scenario, int>>& runs,
                            const std::vector<std::string>& metadata, unsigned threads) {
  ResultTable t;
  t.metadata = metadata;
  t.columns = {"case", "N_max", "max_N_linear", "max_N_advantage"};
  for (const auto& [name, s, n_max] : runs) {
    const auto p = advantage_profile(s, n_max, threads);
    t.add_row({name, static_cast<long long>(n_max), static_cast<long long>(p.max_N_linear),
               static_cast<long long>(p.max_N_advantage)});
  }
  return t;
}

void fig4(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: mQSS vs optimal bipartite ratio, asymmetric network, T2 = 1 s, Tp = 2 us, 1e3 dephasing samples, f_D = 0.01, d_B = 4 km");
  out.note("given: with memories the bipartite baseline may use a memory too; without memories d_A cancels");
  out.note("chosen: d_A in {10, 30, 50} km with memories; d_A = 30 km without");
  const std::string n_to = o.quick ? "6" : "30";
  const std::string steps = o.quick ? "5" : "29";
  const Settings common{{"network.d_B_km", "4"}, {"noise.f_D", "0.01"}, {"memory.T2_s", "1"},
                        {"memory.Tp_s", "2e-06"}, {"finite.enabled", "false"},
                        {"protocol.family", "mQSS"}, {"sweep.parameter", "network.N"},
                        {"sweep.from", "2"}, {"sweep.to", n_to}, {"sweep.steps", steps}};
  std::vector<std::tuple<std::string, Scenario, int>> runs;
  for (const char* da : {"10", "30", "50"}) {
    auto c = with(base, common, "fig4");
    c = with(c, {{"network.d_A_km", da}, {"memory.enabled", "true"}}, "fig4");
    out.write(std::string("fig4_memory_dA") + da + "km.csv", run_sweep(c));
    runs.emplace_back(std::string("memory d_A=") + da + "km", c.resolve().scenario, std::stoi(n_to));
  }
  auto c = with(base, common, "fig4");
  c = with(c, {{"network.d_A_km", "30"}, {"memory.enabled", "false"}}, "fig4");
  out.write("fig4_memoryless.csv", run_sweep(c));
  runs.emplace_back("memoryless", c.resolve().scenario, std::stoi(n_to));
  out.write("fig4_summary.csv", profile_summary(runs, metadata_lines("reproduce fig4", c),
                                                c.resolve().threads));
}

Settings block_size_settings() {
  return {{"network.N", "3"},        {"network.d_A_km", "50"}, {"network.d_B_km", "4"},
          {"noise.f_D", "0.01"},     {"memory.enabled", "true"}, {"memory.T2_s", "1"},
          {"memory.Tp_s", "2e-06"},  {"finite.enabled", "true"}, {"finite.epsilon", "1e-10"},
          {"finite.L", "0"},         {"finite.block_size", "1e10"}};
}

/// Secret fractions against block size for the multipartite protocols and
/// each bipartite candidate.
void block_size_table(const Config& base, const ReproduceOptions& o, Output& out,
                      const std::string& command, bool full) {
  const auto cfg = with(base, block_size_settings(), command);
  const auto rc = cfg.resolve();
  Scenario s = rc.scenario;
  const auto ms = block_sizes(o.quick);

  Scenario asym = s;
  asym.finite.reset();
  const auto multi_asym = evaluate_multipartite(asym);
  const auto bip_asym = evaluate_bipartite(asym);

  ResultTable t;
  t.metadata = metadata_lines("reproduce " + command, cfg);
  if (full) {
    t.columns = {"block_size", "mQSS", "mCKA", "bip_preshared_memory", "bip_switching_memory",
                 "bip_preshared_memoryless", "bip_switching_memoryless", "multi_asymptotic",
                 "bip_asymptotic"};
  } else {
    t.columns = {"block_size", "mQSS", "mQSS_p_key", "mCKA", "mCKA_strategy", "mCKA_p_key",
                 "bip_optimal", "bip_strategy", "bip_memories", "bip_p_key", "multi_asymptotic",
                 "bip_asymptotic"};
  }
  const auto rows = parallel_map(
      ms.size(),
      [&](std::size_t i) {
        Scenario at = s;
        at.finite->block_size = ms[i];
        at.family = Family::mQSS;
        const auto qss = evaluate_multipartite(at);
        at.family = Family::mCKA;
        const auto cka = evaluate_multipartite(at);
        if (full) {
          const auto memoryless = model_qbers(at, 2, false).qbers;
          const auto memory = model_qbers(at, 2, true).qbers;
          const auto bip = bipartite_optimal(at.network, *at.finite, {memoryless, memory}, at.check_rule);
          std::map<std::pair<bool, BasisStrategy>, double> by;
          for (const auto& c : bip.candidates) by[{c.memories, c.strategy}] = c.result.secret_fraction;
          return std::vector<Cell>{ms[i], qss.rate, cka.rate,
                                   by[{true, BasisStrategy::preshared}],
                                   by[{true, BasisStrategy::switching}],
                                   by[{false, BasisStrategy::preshared}],
                                   by[{false, BasisStrategy::switching}],
                                   multi_asym.rate, bip_asym.rate};
        }
        const auto bip = evaluate_bipartite(at);
        return std::vector<Cell>{ms[i], qss.rate, p_cell(qss.p_key), cka.rate,
                                 std::string(to_string(cka.strategy)), p_cell(cka.p_key), bip.rate,
                                 std::string(to_string(bip.strategy)), bip.memories,
                                 p_cell(bip.p_key), multi_asym.rate, bip_asym.rate};
      },
      rc.threads);
  for (auto r : rows) t.add_row(std::move(r));
  out.write(command + (full ? "_secret_fraction_all.csv" : "_secret_fraction.csv"), t);
}

void fig5(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: d_A = 50 km, d_B = 4 km, f_D = 0.01, epsilon = 1e-10, basis probability optimised per point");
  out.note("given: bipartite curve is the maximum over pre-shared key and basis switching");
  out.note("chosen: N = 3 and memories on (bipartite yields use p_A); neither given");
  out.note("chosen: block sizes 1e4..1e12, four per decade");
  block_size_table(base, o, out, "fig5", false);
}

void figC1(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: as fig5 with the bipartite pre-shared and switching curves shown separately");
  out.note("chosen: memory and memoryless bipartite links both listed; N = 3");
  block_size_table(base, o, out, "figC1", true);
}

void figC2(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: optimal key-basis probability against block size; parameters as figC1");
  out.note("chosen: N = 3, memories on");
  const auto cfg = with(base, block_size_settings(), "figC2");
  const auto rc = cfg.resolve();
  const auto ms = block_sizes(o.quick);
  ResultTable t;
  t.metadata = metadata_lines("reproduce figC2", cfg);
  t.columns = {"block_size", "mCKA_preshared", "bCKA_preshared", "mQSS", "bQSS"};
  const auto& net = rc.scenario.network;
  const auto multi_q = model_qbers(rc.scenario, net.n_parties, true).qbers;
  const auto link_q = model_qbers(rc.scenario, 2, true).qbers;
  const auto rows = parallel_map(
      ms.size(),
      [&](std::size_t i) {
        FiniteSizeParams fsp = *rc.scenario.finite;
        fsp.block_size = ms[i];
        const auto link_fsp = fsp.scaled_epsilon(static_cast<double>(net.n_bobs()));
        auto p_star = [&](Family fam, BasisStrategy st) {
          ProtocolSpec spec;
          spec.family = fam;
          spec.memories = true;
          spec.strategy = st;
          spec.check_rule = rc.scenario.check_rule;
          const bool multi = is_multipartite(fam);
          return p_cell(optimize_protocol(net, spec, multi ? fsp : link_fsp,
                                          multi ? multi_q : link_q, rc.scenario.pkey)
                            .p_star);
        };
        return std::vector<Cell>{ms[i], p_star(Family::mCKA, BasisStrategy::preshared),
                                 p_star(Family::bCKA, BasisStrategy::preshared),
                                 p_star(Family::mQSS, BasisStrategy::switching),
                                 p_star(Family::bQSS, BasisStrategy::switching)};
      },
      rc.threads);
  for (auto r : rows) t.add_row(std::move(r));
  out.write("figC2_optimal_pkey.csv", t);
}

void fig6(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: finite-size advantage thresholds, symmetric memoryless network, QSS and CKA");
  out.note("given: noise thresholds at d = 4 km; distance thresholds at f_D = 0.01");
  out.note("chosen: block sizes {1e6, 1e8, 1e10} plus the asymptotic limit; N = 3..12");
  const std::vector<std::string> sizes = o.quick ? std::vector<std::string>{"1e6", "asymptotic"}
                                                 : std::vector<std::string>{"1e6", "1e8", "1e10", "asymptotic"};
  const std::string n_to = o.quick ? "4" : "12";
  const std::string steps = o.quick ? "2" : "10";
  for (const char* fam : {"mQSS", "mCKA"}) {
    for (const char* target : {"noise", "distance"}) {
      ResultTable t;
      for (const auto& m : sizes) {
        const bool finite = m != "asymptotic";
        Settings st{{"protocol.family", fam},
                    {"memory.enabled", "false"},
                    {"finite.enabled", finite ? "true" : "false"},
                    {"finite.L", "0"},
                    {"finite.block_size", finite ? m : "auto"},
                    {"finite.epsilon", "1e-10"},
                    {"threshold.target", target},
                    {"threshold.lo", "0"},
                    {"sweep.parameter", "network.N"},
                    {"sweep.from", "3"},
                    {"sweep.to", n_to},
                    {"sweep.steps", steps}};
        if (std::string(target) == "noise") {
          st.insert(st.end(), {{"network.d_A_km", "4"}, {"network.d_B_km", "4"},
                               {"threshold.hi", "0.5"}});
        } else {
          st.insert(st.end(), {{"noise.f_D", "0.01"}, {"threshold.symmetric", "true"},
                               {"threshold.hi", "200"}});
        }
        const auto c = with(base, st, "fig6");
        append(t, run_threshold(c), {"block_size"}, {finite ? Cell(std::stod(m)) : Cell{}});
      }
      out.write(std::string("fig6_") + fam + "_" + target + "_threshold.csv", t);
    }
  }
}

void fig7(const Config& base, const ReproduceOptions& o, Output& out) {
  out.note("given: finite-size mQSS and mCKA vs N with (top) and without (bottom) memories");
  out.note("given: d_A = 50 km, d_B = 4 km, f_D = 0.01, T2 = 1 s, Tp = 2 us, 1e3 samples, epsilon = 1e-10, p_key optimised");
  out.note("chosen: block sizes {1e4, 1e5, 1e6, 1e8, 1e10}; N = 2..25");
  const std::vector<std::string> sizes = o.quick ? std::vector<std::string>{"1e5"}
                                                 : std::vector<std::string>{"1e4", "1e5", "1e6", "1e8", "1e10"};
  const std::string n_to = o.quick ? "5" : "25";
  const std::string steps = o.quick ? "4" : "24";
  std::vector<std::tuple<std::string, Scenario, int>> runs;
  Config last = base;
  for (const char* mem : {"true", "false"}) {
    for (const char* fam : {"mQSS", "mCKA"}) {
      ResultTable t;
      for (const auto& m : sizes) {
        const auto c = with(base,
                            {{"network.d_A_km", "50"}, {"network.d_B_km", "4"},
                             {"noise.f_D", "0.01"}, {"memory.enabled", mem},
                             {"memory.T2_s", "1"}, {"memory.Tp_s", "2e-06"},
                             {"protocol.family", fam}, {"finite.enabled", "true"},
                             {"finite.L", "0"}, {"finite.block_size", m},
                             {"finite.epsilon", "1e-10"}, {"sweep.parameter", "network.N"},
                             {"sweep.from", "2"}, {"sweep.to", n_to}, {"sweep.steps", steps}},
                            "fig7");
        append(t, run_sweep(c), {"block_size"}, {std::stod(m)});
        runs.emplace_back(std::string(mem[0] == 't' ? "memory" : "memoryless") + " " + fam +
                              " m=" + m,
                          c.resolve().scenario, std::stoi(n_to));
        last = c;
      }
      out.write(std::string("fig7_") + (mem[0] == 't' ? "memory_" : "memoryless_") + fam + ".csv", t);
    }
  }
  out.write("fig7_summary.csv",
            profile_summary(runs, metadata_lines("reproduce fig7", last), last.resolve().threads));
}

const std::map<std::string, std::function<void(const Config&, const ReproduceOptions&, Output&)>>&
recipes() {
  static const std::map<std::string,
                        std::function<void(const Config&, const ReproduceOptions&, Output&)>>
      r{{"fig2", fig2}, {"fig3", fig3}, {"fig4", fig4}, {"fig5", fig5},
        {"fig6", fig6}, {"fig7", fig7}, {"figC1", figC1}, {"figC2", figC2}};
  return r;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig5",
                                            "fig6", "fig7", "figC1", "figC2"};
  return ids;
}

std::vector<std::string> run_reproduce(const ReproduceOptions& opts, const Config& base) {
  const auto it = recipes().find(opts.figure);
  if (it == recipes().end()) throw ConfigError("reproduce: unknown figure '" + opts.figure + "'");
  fs::create_directories(opts.out_dir);
  Output out{opts.out_dir, opts.figure, {}, {}};
  out.note("figure = " + opts.figure);
  out.note(std::string("ghzkey ") + version());
  out.note(std::string("grid = ") + (opts.quick ? "quick" : "full"));
  out.note("seed = " + base.get("mc.seed"));
  out.note("mc.samples = " + base.get("mc.samples"));
  it->second(base, opts, out);
  const auto manifest = (fs::path(opts.out_dir) / (opts.figure + "_manifest.txt")).string();
  std::ofstream m(manifest, std::ios::binary);
  if (!m) throw std::runtime_error("cannot write " + manifest);
  for (const auto& line : out.manifest) m << line << '\n';
  out.files.push_back(manifest);
  return out.files;
}

}  // namespace ghzkey::cli
