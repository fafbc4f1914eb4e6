#include "ghzkey/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace ghzkey::cli {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> d{
      {"network.N", "3"},
      {"network.d_A_km", "4"},
      {"network.d_B_km", "4"},
      {"noise.f_D", "0.01"},
      {"memory.enabled", "false"},
      {"memory.T2_s", "1"},
      {"memory.Tp_s", "2e-06"},
      {"memory.c_m_per_s", "200000000"},
      {"memory.correction_term", "derived"},
      {"protocol.family", "mQSS"},
      {"protocol.strategy", "switching"},
      {"protocol.p_key", "opt"},
      {"protocol.check_rule", "as_printed"},
      {"protocol.k_rule", "global"},
      {"finite.enabled", "false"},
      {"finite.L", "0"},
      {"finite.block_size", "auto"},
      {"finite.epsilon", "1e-10"},
      {"finite.eps_c", "auto"},
      {"finite.eps_PA", "auto"},
      {"finite.eps_PE", "auto"},
      {"finite.eps_EC", "auto"},
      {"finite.eps_rob", "auto"},
      {"mc.samples", "1000"},
      {"mc.seed", "1"},
      {"sweep.parameter", ""},
      {"sweep.from", "0"},
      {"sweep.to", "1"},
      {"sweep.steps", "11"},
      {"sweep.scale", "linear"},
      {"threshold.target", "distance"},
      {"threshold.lo", "0"},
      {"threshold.hi", "auto"},
      {"threshold.symmetric", "true"},
      {"output.path", ""},
      {"run.threads", "0"},
  };
  return d;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    if (log_scale) {
      out.push_back(std::pow(10.0, std::log10(from) + t * (std::log10(to) - std::log10(from))));
    } else {
      out.push_back(from + t * (to - from));
    }
  }
  return out;
}

std::string SweepAxis::label() const {
  std::string s;
  for (const auto& k : keys) s += (s.empty() ? "" : "+") + k;
  return s;
}

Config::Config() {
  for (const auto& [k, v] : defaults()) values_[k] = {v, "default"};
}

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, v] : defaults()) k.push_back(key);
    std::sort(k.begin(), k.end());
    return k;
  }();
  return keys;
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin + ": unknown key '" + key + "'");
  it->second = {value, origin};
}

void Config::load(std::istream& in, const std::string& source) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = source + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ": empty key");
    set(key, trim(line.substr(eq + 1)), origin);
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  load(in, path);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("internal: unknown key '" + key + "'");
  return it->second.value;
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, e] : values_) out.emplace_back(k, e.value);
  return out;
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto& e = values_.at(key);
  throw ConfigError(e.origin + ": " + key + " = '" + e.value + "': " + message);
}

double Config::number(const std::string& key) const {
  const auto v = parse_double(get(key));
  if (!v) fail(key, "not a finite number");
  return *v;
}

std::uint64_t Config::count(const std::string& key) const {
  const double v = number(key);
  if (v < 0.0 || v != std::floor(v) || v > 1.8e19) fail(key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

bool Config::flag(const std::string& key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(key, "expected true or false");
}

bool Config::is_auto(const std::string& key) const { return get(key) == "auto"; }

RunConfig Config::resolve() const {
  RunConfig rc;
  Scenario& s = rc.scenario;

  const auto n = count("network.N");
  if (n < 2 || n > 1000) fail("network.N", "need 2 <= N <= 1000");
  s.network.n_parties = static_cast<int>(n);
  s.network.d_A_km = number("network.d_A_km");
  s.network.d_B_km = number("network.d_B_km");
  if (s.network.d_A_km < 0.0) fail("network.d_A_km", "distance must be non-negative");
  if (s.network.d_B_km < 0.0) fail("network.d_B_km", "distance must be non-negative");

  const double f = number("noise.f_D");
  if (f < 0.0 || f > 1.0) fail("noise.f_D", "must lie in [0,1]");
  s.noise.f_D = Probability(f);
  s.memories = flag("memory.enabled");
  s.noise.T2_s = number("memory.T2_s");
  s.noise.Tp_s = number("memory.Tp_s");
  s.noise.c_m_per_s = number("memory.c_m_per_s");
  try {
    s.noise.validate();
  } catch (const std::invalid_argument& e) {
    fail("memory.T2_s", e.what());
  }
  const auto& term = get("memory.correction_term");
  if (term == "derived") {
    s.term = CorrectionTerm::derived;
  } else if (term == "as_printed") {
    s.term = CorrectionTerm::as_printed;
  } else {
    fail("memory.correction_term", "expected derived or as_printed");
  }
  if (s.memories && s.network.d_A_km < s.network.d_B_km) {
    fail("memory.enabled", "memory network needs d_A_km >= d_B_km");
  }

  ProtocolSpec& p = rc.protocol;
  try {
    p.family = parse_family(get("protocol.family"));
  } catch (const std::invalid_argument& e) {
    fail("protocol.family", e.what());
  }
  try {
    p.strategy = parse_strategy(get("protocol.strategy"));
  } catch (const std::invalid_argument& e) {
    fail("protocol.strategy", e.what());
  }
  p.memories = s.memories;
  if (get("protocol.p_key") == "opt") {
    rc.optimise_pkey = true;
  } else {
    rc.optimise_pkey = false;
    const double pk = number("protocol.p_key");
    if (!(pk > 0.0 && pk < 1.0)) fail("protocol.p_key", "must lie in (0,1) or be 'opt'");
    p.p_key = Probability(pk);
  }
  const auto& cr = get("protocol.check_rule");
  if (cr == "as_printed") {
    p.check_rule = CheckSiftingRule::as_printed;
  } else if (cr == "alice_and_any_bob") {
    p.check_rule = CheckSiftingRule::alice_and_any_bob;
  } else {
    fail("protocol.check_rule", "expected as_printed or alice_and_any_bob");
  }
  const auto& kr = get("protocol.k_rule");
  if (kr == "global") {
    p.k_rule = CheckCountRule::global;
  } else if (kr == "per_pair") {
    p.k_rule = CheckCountRule::per_pair;
  } else {
    fail("protocol.k_rule", "expected global or per_pair");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail("protocol.strategy", e.what());
  }
  s.family = is_multipartite(p.family) ? p.family : Family::mQSS;
  s.check_rule = p.check_rule;

  if (flag("finite.enabled")) {
    const double eps = number("finite.epsilon");
    if (!(eps > 0.0 && eps < 1.0)) fail("finite.epsilon", "must lie in (0,1)");
    FiniteSizeParams fsp = epsilon_budget(eps);
    auto eps_override = [&](const char* key, double& slot) {
      if (is_auto(key)) return;
      slot = number(key);
      if (!(slot > 0.0 && slot < 1.0)) fail(key, "must lie in (0,1) or be 'auto'");
    };
    eps_override("finite.eps_c", fsp.eps_c);
    eps_override("finite.eps_PA", fsp.eps_PA);
    eps_override("finite.eps_PE", fsp.eps_PE);
    if (is_auto("finite.eps_EC")) fsp.eps_EC = fsp.eps_c;
    if (is_auto("finite.eps_rob")) fsp.eps_rob = fsp.eps_c;
    eps_override("finite.eps_EC", fsp.eps_EC);
    eps_override("finite.eps_rob", fsp.eps_rob);
    fsp.L = number("finite.L");
    if (fsp.L < 0.0) fail("finite.L", "must be non-negative");
    if (is_auto("finite.block_size")) {
      fsp.block_size = fsp.L > 0.0 ? 0.0 : 1e10;
    } else {
      fsp.block_size = number("finite.block_size");
    }
    if ((fsp.L > 0.0) == (fsp.block_size > 0.0)) {
      fail("finite.block_size", "set exactly one of finite.L and finite.block_size");
    }
    if (fsp.L > 0.0 && fsp.L < 1.0) fail("finite.L", "must be >= 1");
    fsp.mc_samples = count("mc.samples");
    fsp.seed = count("mc.seed");
    s.finite = fsp;
  }
  s.mc_samples = count("mc.samples");
  if (s.mc_samples < 1) fail("mc.samples", "need at least one sample");
  s.seed = count("mc.seed");

  const auto& sweep = get("sweep.parameter");
  if (!sweep.empty()) {
    SweepAxis axis;
    std::stringstream ss(sweep);
    std::string key;
    while (std::getline(ss, key, '+')) {
      key = trim(key);
      if (values_.find(key) == values_.end()) fail("sweep.parameter", "unknown key '" + key + "'");
      if (key.rfind("sweep.", 0) == 0 || key.rfind("output.", 0) == 0 ||
          key.rfind("run.", 0) == 0) {
        fail("sweep.parameter", "'" + key + "' cannot be swept");
      }
      axis.keys.push_back(key);
    }
    axis.from = number("sweep.from");
    axis.to = number("sweep.to");
    const auto steps = count("sweep.steps");
    if (steps < 1 || steps > 100000) fail("sweep.steps", "need 1 <= steps <= 100000");
    axis.steps = static_cast<int>(steps);
    const auto& scale = get("sweep.scale");
    if (scale == "log") {
      axis.log_scale = true;
      if (!(axis.from > 0.0 && axis.to > 0.0)) fail("sweep.scale", "log sweep needs positive bounds");
    } else if (scale != "linear") {
      fail("sweep.scale", "expected linear or log");
    }
    rc.sweep = axis;
  }

  const auto& target = get("threshold.target");
  auto& q = rc.threshold;
  if (target == "distance") {
    q.target = ThresholdTarget::distance;
  } else if (target == "noise") {
    q.target = ThresholdTarget::noise;
  } else {
    fail("threshold.target", "expected distance or noise");
  }
  q.n_parties = s.network.n_parties;
  q.symmetric_distance = flag("threshold.symmetric");
  q.lo = number("threshold.lo");
  q.hi = is_auto("threshold.hi") ? (q.target == ThresholdTarget::distance ? 200.0 : 0.5)
                                 : number("threshold.hi");
  if (!(q.lo < q.hi)) fail("threshold.hi", "need threshold.lo < threshold.hi");
  if (q.lo < 0.0) fail("threshold.lo", "must be non-negative");
  if (q.target == ThresholdTarget::noise && q.hi > 1.0) fail("threshold.hi", "noise bracket must lie in [0,1]");

  rc.output_path = get("output.path");
  const auto threads = count("run.threads");
  if (threads > 1024) fail("run.threads", "at most 1024 threads");
  rc.threads = static_cast<unsigned>(threads);
  return rc;
}

}  // namespace ghzkey::cli
