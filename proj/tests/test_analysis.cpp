#include <cmath>
#include <random>

#include "doctest.h"
#include "ghzkey/analysis.hpp"

using namespace ghzkey;

namespace {

double h2(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1 - q) * std::log2(1 - q);
}

Scenario symmetric(int n, double d, double f) {
  Scenario s;
  s.network = NetworkConfig::symmetric(n, d);
  s.noise.f_D = Probability(f);
  return s;
}

}  // namespace

TEST_CASE("noiseless distance thresholds match the closed form") {
  for (int n : {3, 4, 5, 8}) {
    ThresholdQuery q;
    q.n_parties = n;
    const auto r = find_threshold(q, symmetric(n, 0.0, 0.0));
    REQUIRE(r.found);
    const double p = std::pow(n - 1.0, -1.0 / (n - 2.0));
    CHECK(r.value == doctest::Approx(-50.0 * std::log10(p)).epsilon(1e-9));
    CHECK(std::abs(r.multi_rate - r.bip_rate) < 1e-9 * std::max(r.multi_rate, r.bip_rate));
  }
}

TEST_CASE("noise threshold at zero distance matches a fine scan") {
  auto gap = [](double f) {
    const double q3 = 0.5 * (1 - std::pow(1 - f, 3));
    const double q2 = 0.5 * (1 - std::pow(1 - f, 2));
    return (1 - 2 * h2(q3)) - 0.5 * (1 - 2 * h2(q2));
  };
  double scan = -1.0;
  for (int i = 0; i < 2000000; ++i) {
    const double f = 0.25 * i / 2000000;
    if (gap(f) <= 0.0) {
      scan = f;
      break;
    }
  }
  REQUIRE(scan > 0.0);
  ThresholdQuery q;
  q.target = ThresholdTarget::noise;
  q.n_parties = 3;
  q.hi = 0.5;
  const auto r = find_threshold(q, symmetric(3, 0.0, 0.0));
  REQUIRE(r.found);
  CHECK(std::abs(r.value - scan) < 2e-7);
}

TEST_CASE("thresholds report a missing sign change") {
  ThresholdQuery q;
  q.n_parties = 2;
  const auto never = find_threshold(q, symmetric(2, 0.0, 0.0));
  CHECK_FALSE(never.found);
  CHECK(never.reason == "no threshold in bracket");
  CHECK_FALSE(never.advantage_at_lo);
  q.n_parties = 3;
  q.hi = 1.0;
  const auto always = find_threshold(q, symmetric(3, 0.0, 0.0));
  CHECK_FALSE(always.found);
  CHECK(always.advantage_at_lo);
  CHECK(always.advantage_at_hi);
}

TEST_CASE("finite-size thresholds re-evaluate to equal rates") {
  Scenario s = symmetric(4, 4.0, 0.0);
  auto f = epsilon_budget(1e-10);
  f.block_size = 1e8;
  s.finite = f;
  ThresholdQuery q;
  q.target = ThresholdTarget::noise;
  q.n_parties = 4;
  q.hi = 0.5;
  const auto r = find_threshold(q, s);
  REQUIRE(r.found);
  CHECK(std::abs(r.multi_rate - r.bip_rate) < 1e-9 * std::max(r.multi_rate, r.bip_rate));
}

TEST_CASE("p_key optimiser") {
  const auto peak = optimize_pkey([](double p) { return 1.0 - (p - 0.37) * (p - 0.37); });
  CHECK(peak.p_star == doctest::Approx(0.37).epsilon(1e-6));
  CHECK_FALSE(peak.indeterminate);
  const auto near_one = optimize_pkey([](double p) { return 1.0 - 1e6 * (p - 0.99998) * (p - 0.99998); });
  CHECK(std::abs(near_one.p_star - 0.99998) < 1e-7);
  const auto none = optimize_pkey([](double) { return 0.0; });
  CHECK(none.indeterminate);
  CHECK(std::isnan(none.p_star));
  CHECK(none.value == 0.0);

  // Never below the best coarse-grid value, bumpy objective included.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1.0, 40.0);
  for (int t = 0; t < 50; ++t) {
    const double w = u(rng);
    auto obj = [w](double p) { return 1.5 + std::sin(w * p) * std::cos(3.1 * w * p * p); };
    double grid_best = -1e9;
    for (int i = 1; i <= 200; ++i) grid_best = std::max(grid_best, obj(i / 201.0));
    CHECK(optimize_pkey(obj).value >= grid_best);
  }
}

TEST_CASE("memoryless asymmetric noiseless ratio is N - 1") {
  Scenario s;
  s.network = NetworkConfig::asymmetric(2, 30.0, 0.0);
  s.noise.f_D = Probability(0.0);
  const auto prof = advantage_profile(s, 12, 2);
  for (const auto& p : prof.points) {
    CHECK(p.status == RatioStatus::ok);
    CHECK(p.ratio == doctest::Approx(p.n_parties - 1.0).epsilon(1e-12));
  }
  CHECK(prof.max_N_linear == 12);
  CHECK(prof.max_N_advantage == 12);
}

TEST_CASE("profiles are deterministic and ordered") {
  Scenario s;
  s.network = NetworkConfig::asymmetric(2, 30.0, 4.0);
  s.noise.f_D = Probability(0.01);
  s.memories = true;
  s.mc_samples = 300;
  const auto a = advantage_profile(s, 15, 1);
  const auto b = advantage_profile(s, 15, 8);
  REQUIRE(a.points.size() == 14);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].n_parties == static_cast<int>(i) + 2);
    CHECK(a.points[i].ratio == b.points[i].ratio);
  }
  CHECK(a.max_N_linear <= a.max_N_advantage);
}

TEST_CASE("long-lived memories dominate the memoryless network") {
  Scenario s;
  s.network = NetworkConfig::asymmetric(2, 30.0, 4.0);
  s.noise.f_D = Probability(0.01);
  s.noise.T2_s = 100.0;
  s.mc_samples = 200;
  s.memories = true;
  const auto mem = advantage_profile(s, 20, 4);
  s.memories = false;
  const auto plain = advantage_profile(s, 20, 4);
  for (std::size_t i = 0; i < mem.points.size(); ++i) {
    if (plain.points[i].status != RatioStatus::ok) continue;
    CHECK(mem.points[i].ratio >= plain.points[i].ratio - 1e-12);
  }
}

TEST_CASE("ratio bookkeeping") {
  const auto dead = evaluate_point(symmetric(3, 4.0, 0.5));
  CHECK(dead.status == RatioStatus::both_zero);
  CHECK(std::string(to_string(dead.status)) == "both zero");
}

TEST_CASE("mCKA takes the better strategy") {
  Scenario s;
  s.network = NetworkConfig::asymmetric(3, 50.0, 4.0);
  s.noise.f_D = Probability(0.01);
  s.memories = true;
  auto f = epsilon_budget(1e-10);
  for (double m : {1e4, 1e7, 1e10}) {
    f.block_size = m;
    s.finite = f;
    s.family = Family::mQSS;
    const auto qss = evaluate_multipartite(s);
    s.family = Family::mCKA;
    const auto cka = evaluate_multipartite(s);
    CHECK(cka.rate >= qss.rate);
  }
  // Huge blocks: the optimal basis bias goes to one.
  f.block_size = 1e20;
  s.finite = f;
  CHECK(evaluate_multipartite(s).p_key > 0.9999);
}
