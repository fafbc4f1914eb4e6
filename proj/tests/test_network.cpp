#include <cmath>

#include "doctest.h"
#include "ghzkey/network.hpp"

using namespace ghzkey;

namespace {
ProtocolSpec make(Family f, bool mem, BasisStrategy s = BasisStrategy::switching) {
  ProtocolSpec p;
  p.family = f;
  p.memories = mem;
  p.strategy = s;
  return p;
}
}  // namespace

TEST_CASE("parsing round-trips and rejects junk") {
  for (auto f : {Family::mQSS, Family::mCKA, Family::bQSS, Family::bCKA}) {
    CHECK(parse_family(to_string(f)) == f);
  }
  for (auto s : {BasisStrategy::preshared, BasisStrategy::switching}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_family("QSS"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy("random"), std::invalid_argument);
}

TEST_CASE("symmetric memoryless yields") {
  const auto cfg = NetworkConfig::symmetric(4, 10.0);
  const double p = std::pow(10.0, -0.2);
  CHECK(yields(cfg, make(Family::mQSS, false)).value() == doctest::Approx(std::pow(p, 4)));
  CHECK(yields(cfg, make(Family::bQSS, false)).value() == doctest::Approx(p * p / 3.0));
}

TEST_CASE("asymmetric and memory yields") {
  const auto cfg = NetworkConfig::asymmetric(5, 50.0, 4.0);
  const double pa = 0.1;
  const double pb = std::pow(10.0, -0.08);
  CHECK(yields(cfg, make(Family::mCKA, false)).value() == doctest::Approx(pa * std::pow(pb, 4)));
  CHECK(yields(cfg, make(Family::bCKA, false)).value() == doctest::Approx(pa * pb / 4.0));
  CHECK(yields(cfg, make(Family::mQSS, true)).value() == doctest::Approx(pa));
  CHECK(yields(cfg, make(Family::bQSS, true)).value() == doctest::Approx(pa / 4.0));
  const auto backwards = NetworkConfig::asymmetric(3, 4.0, 50.0);
  CHECK_THROWS_AS(yields(backwards, make(Family::mQSS, true)), std::invalid_argument);
}

TEST_CASE("config validation") {
  CHECK_THROWS(NetworkConfig::symmetric(1, 1.0));
  CHECK_THROWS(NetworkConfig::asymmetric(3, -1.0, 1.0));
  CHECK_THROWS_AS(make(Family::mQSS, false, BasisStrategy::preshared).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(make(Family::mCKA, false, BasisStrategy::preshared).validate());
}

TEST_CASE("sifting efficiencies") {
  const Probability p(0.9);
  auto pre = sifting(BasisStrategy::preshared, p, 5);
  CHECK(pre.eta_key.value() == doctest::Approx(0.9));
  CHECK(pre.eta_check.value() == doctest::Approx(0.1));

  auto two = sifting(BasisStrategy::switching, p, 2);
  CHECK(two.eta_key.value() == doctest::Approx(0.81));
  CHECK(two.eta_check.value() == doctest::Approx(0.01));

  auto three = sifting(BasisStrategy::switching, p, 3);
  CHECK(three.eta_key.value() == doctest::Approx(0.729));
  CHECK(three.eta_check.value() == doctest::Approx(0.1 * (1 - 0.9)));
  auto three_any = sifting(BasisStrategy::switching, p, 3, CheckSiftingRule::alice_and_any_bob);
  CHECK(three_any.eta_check.value() == doctest::Approx(0.1 * (1 - 0.81)));

  // Bipartite families sift as a single link whatever N is.
  auto spec = make(Family::bQSS, false);
  spec.p_key = p;
  auto link = sifting(spec, 6);
  CHECK(link.eta_key.value() == doctest::Approx(0.81));
}

TEST_CASE("switching sifting never exceeds one in total") {
  for (int n = 2; n <= 12; ++n) {
    for (double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
      for (auto rule : {CheckSiftingRule::as_printed, CheckSiftingRule::alice_and_any_bob}) {
        const auto e = sifting(BasisStrategy::switching, Probability(p), n, rule);
        CHECK(e.eta_key + e.eta_check <= 1.0 + 1e-15);
      }
    }
  }
}

TEST_CASE("expected counts") {
  const auto cfg = NetworkConfig::asymmetric(3, 50.0, 4.0);
  auto spec = make(Family::mCKA, true, BasisStrategy::preshared);
  spec.p_key = Probability(0.75);
  const auto c = expected_counts(cfg, spec, 1e6);
  CHECK(c.m == doctest::Approx(0.75 * 0.1 * 1e6));
  CHECK(c.k == doctest::Approx(0.25 * 0.1 * 1e6));
  CHECK(c.k_i == c.k);
  spec.strategy = BasisStrategy::switching;
  spec.k_rule = CheckCountRule::per_pair;
  const auto d = expected_counts(cfg, spec, 1e6);
  CHECK(d.m == doctest::Approx(std::pow(0.75, 3) * 0.1 * 1e6));
  CHECK(d.k_i == doctest::Approx(0.0625 * 0.1 * 1e6));
  CHECK_THROWS(expected_counts(cfg, spec, 0.5));
}

TEST_CASE("sifting simulation is seeded") {
  const auto a = simulate_sifting(Probability(0.7), 4, 10000, 11);
  const auto b = simulate_sifting(Probability(0.7), 4, 10000, 11);
  const auto c = simulate_sifting(Probability(0.7), 4, 10000, 12);
  CHECK(a.key_rounds == b.key_rounds);
  CHECK(a.check_rounds == b.check_rounds);
  CHECK(a.key_rounds != c.key_rounds);
  CHECK(a.eta_key == doctest::Approx(static_cast<double>(a.key_rounds) / 10000));
}
