#include <sstream>

#include "doctest.h"
#include "ghzkey/cli/commands.hpp"

using namespace ghzkey;
using namespace ghzkey::cli;

namespace {

std::string render(const ResultTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

}  // namespace

TEST_CASE("config files parse with comments and report line numbers") {
  Config c;
  std::istringstream in(
      "# header\n"
      "network.N = 4   # trailing\n"
      "\n"
      "noise.f_D=0.02\n");
  c.load(in, "a.cfg");
  CHECK(c.get("network.N") == "4");
  CHECK(c.get("noise.f_D") == "0.02");
  const auto rc = c.resolve();
  CHECK(rc.scenario.network.n_parties == 4);
  CHECK(rc.scenario.noise.f_D.value() == doctest::Approx(0.02));

  Config bad;
  std::istringstream in2("network.N = 3\n\nnetwork.distance = 4\n");
  try {
    bad.load(in2, "b.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("b.cfg:3: unknown key 'network.distance'") != std::string::npos);
  }
  CHECK_THROWS_AS(bad.apply_override("nope=1"), ConfigError);
  CHECK_THROWS_AS(bad.apply_override("missing-equals"), ConfigError);
}

TEST_CASE("invalid values name their origin") {
  Config c;
  c.apply_override("noise.f_D=1.5");
  try {
    (void)c.resolve();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("--set") != std::string::npos);
    CHECK(msg.find("noise.f_D") != std::string::npos);
  }
  Config q;
  q.apply_override("protocol.family=mQSS");
  q.apply_override("protocol.strategy=preshared");
  CHECK_THROWS_AS((void)q.resolve(), ConfigError);
}

TEST_CASE("defaults resolve and every known key is listed") {
  Config c;
  const auto rc = c.resolve();
  CHECK(rc.scenario.network.n_parties >= 2);
  CHECK_FALSE(rc.scenario.finite.has_value());
  CHECK(c.entries().size() == Config::known_keys().size());
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1e10) == "10000000000");
  CHECK(format_number(15.051499783199) == "15.0514997832");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-1.0 / 0.0) == "-inf");
}

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  CHECK(format_cell(Cell{}) == "");
  CHECK(format_cell(Cell{true}) == "true");
  CHECK(format_cell(Cell{42LL}) == "42");
  ResultTable t;
  t.columns = {"x", "y"};
  CHECK_THROWS(t.add_row({Cell{1.0}}));
  t.add_row({Cell{1.0}, Cell{std::string("p,q")}});
  t.metadata = {"note"};
  CHECK(render(t) == "# note\nx,y\n1,\"p,q\"\n");
}

TEST_CASE("sweeps expand in order and move paired keys together") {
  Config c;
  c.apply_override("sweep.parameter=network.d_A_km+network.d_B_km");
  c.apply_override("sweep.from=0");
  c.apply_override("sweep.to=10");
  c.apply_override("sweep.steps=3");
  const auto pts = expand_sweep(c);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].first == doctest::Approx(5.0));
  CHECK(pts[1].second.scenario.network.d_A_km == doctest::Approx(5.0));
  CHECK(pts[1].second.scenario.network.d_B_km == doctest::Approx(5.0));

  Config l;
  l.apply_override("sweep.parameter=finite.block_size");
  l.apply_override("sweep.from=1e4");
  l.apply_override("sweep.to=1e8");
  l.apply_override("sweep.steps=5");
  l.apply_override("sweep.scale=log");
  const auto lp = expand_sweep(l);
  REQUIRE(lp.size() == 5);
  CHECK(lp[2].first == doctest::Approx(1e6));
}

TEST_CASE("rate output is deterministic and carries metadata") {
  Config c;
  c.apply_override("memory.enabled=true");
  c.apply_override("network.d_A_km=30");
  c.apply_override("network.d_B_km=4");
  c.apply_override("noise.f_D=0.01");
  c.apply_override("mc.samples=200");
  c.apply_override("mc.seed=9");
  const auto a = render(run_rate(c));
  const auto b = render(run_rate(c));
  CHECK(a == b);
  CHECK(a.find("# seed: 9") != std::string::npos);
  CHECK(a.find("# config: memory.enabled=true") != std::string::npos);
  c.apply_override("mc.seed=10");
  CHECK(render(run_rate(c)) != a);
}

TEST_CASE("optimize-pkey requires finite blocks") {
  Config c;
  CHECK_THROWS_AS(run_optimize_pkey(c), ConfigError);
}

TEST_CASE("oracle report detects an injected fault") {
  OracleOptions o;
  o.parties = {2};
  const auto good = run_oracle_check(o);
  CHECK(good.passed());
  CHECK(good.cases > 0);
  o.inject_b_sign_fault = true;
  CHECK_FALSE(run_oracle_check(o).passed());
  o.parties = {5};
  CHECK_THROWS_AS(run_oracle_check(o), ConfigError);
}
