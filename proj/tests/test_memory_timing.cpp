#include <cmath>

#include "doctest.h"
#include "ghzkey/memory_timing.hpp"

using namespace ghzkey;

TEST_CASE("trial periods") {
  NoiseParams noise;
  const auto t = trial_times(NetworkConfig::asymmetric(3, 30.0, 4.0), noise);
  CHECK(t.tau_A_s == doctest::Approx(2e-6 + 30e3 / 2e8));
  CHECK(t.tau_B_s == doctest::Approx(2e-6 + 8e3 / 2e8));
  CHECK(t.comm_B_s == doctest::Approx(8e3 / 2e8));
}

TEST_CASE("waiting times follow the trial indices") {
  TimingConfig t{1.0, 0.25, 0.1, 1.0};
  RoundSample s{3, {1, 4, 20}};
  const auto w = waiting_times(s, t);
  REQUIRE(w.size() == 3);
  CHECK(w[0].t_B_s == doctest::Approx(3.0 - 0.25 + 0.1));
  CHECK(w[1].t_B_s == doctest::Approx(3.0 - 1.0 + 0.1));
  // A Bob that finished after Alice waits only for the classical signal.
  CHECK(w[2].t_B_s == doctest::Approx(0.1));
  for (const auto& x : w) CHECK(x.t_C_s == x.t_B_s);
}

TEST_CASE("rng streams are reproducible and distinct") {
  auto a = seeded_rng(42, 3);
  auto b = seeded_rng(42, 3);
  auto c = seeded_rng(42, 4);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

TEST_CASE("trial indices are geometric") {
  auto rng = seeded_rng(1, 0);
  const int n = 200000;
  double sum_a = 0.0, sum_b = 0.0;
  std::uint64_t min_idx = 1000;
  for (int i = 0; i < n; ++i) {
    const auto r = sample_round(Probability(0.1), Probability(0.5), 3, rng);
    sum_a += static_cast<double>(r.n_A);
    sum_b += static_cast<double>(r.n_B[0] + r.n_B[1]) / 2;
    min_idx = std::min({min_idx, r.n_A, r.n_B[0], r.n_B[1]});
  }
  CHECK(min_idx == 1);
  // mean 1/p, standard error sqrt((1-p)/p^2 / n)
  CHECK(std::abs(sum_a / n - 10.0) < 5 * std::sqrt(90.0 / n));
  CHECK(std::abs(sum_b / n - 2.0) < 5 * std::sqrt(2.0 / (2 * n)));
  CHECK_THROWS(sample_round(Probability(0.0), Probability(0.5), 3, rng));
}

TEST_CASE("without dephasing the estimate is exact") {
  NoiseParams noise;
  noise.f_D = Probability(0.05);
  noise.T2_s = 1e30;
  auto rng = seeded_rng(3);
  const auto e = expected_alpha_beta(NetworkConfig::asymmetric(4, 30.0, 4.0), noise, 100, rng);
  const double sum = std::pow(1 - 0.025, 3);
  const double diff = std::pow(1 - 0.05, 3);
  CHECK(e.alpha == doctest::Approx((sum + diff) / 2).epsilon(1e-12));
  CHECK(e.beta == doctest::Approx((sum - diff) / 2).epsilon(1e-12));
  CHECK(e.alpha_se < 1e-12);
}

TEST_CASE("dephasing lowers alpha and is reported with an error bar") {
  NoiseParams noise;
  noise.f_D = Probability(0.0);
  noise.T2_s = 0.01;
  auto rng = seeded_rng(3);
  const auto e = expected_alpha_beta(NetworkConfig::asymmetric(3, 30.0, 4.0), noise, 2000, rng);
  CHECK(e.alpha < 0.999);
  CHECK(e.alpha + e.beta == doctest::Approx(1.0));
  CHECK(e.alpha_se > 0.0);
  CHECK(e.samples == 2000);
  // Bobs sit on the short link and usually finish before Alice.
  CHECK(e.clamped_waits < e.samples);
  auto again = seeded_rng(3);
  CHECK(expected_alpha_beta(NetworkConfig::asymmetric(3, 30.0, 4.0), noise, 2000, again).alpha ==
        e.alpha);
}

TEST_CASE("memory chain QBERs grow as T2 shrinks") {
  NoiseParams noise;
  noise.f_D = Probability(0.01);
  double last = -1.0;
  for (double t2 : {10.0, 1.0, 0.1, 0.01}) {
    noise.T2_s = t2;
    auto rng = seeded_rng(8);
    const auto q = memory_network_qbers(NetworkConfig::asymmetric(5, 30.0, 4.0), noise, 1000, rng);
    CHECK(q.qbers.q_x.value() > last);
    last = q.qbers.q_x.value();
  }
}
