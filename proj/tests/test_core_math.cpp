#include <cmath>
#include <random>

#include "doctest.h"
#include "ghzkey/core_math.hpp"

using namespace ghzkey;

TEST_CASE("probability rejects values outside the unit interval") {
  CHECK_THROWS_AS(Probability(-1e-12), std::invalid_argument);
  CHECK_THROWS_AS(Probability(1.0 + 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(Probability(std::nan("")), std::invalid_argument);
  CHECK(Probability(0.25).complement().value() == doctest::Approx(0.75));
}

TEST_CASE("binary entropy spot values") {
  CHECK(binary_entropy(Probability(0.0)).value == 0.0);
  CHECK(binary_entropy(Probability(1.0)).value == 0.0);
  CHECK(binary_entropy(Probability(0.5)).value == doctest::Approx(1.0).epsilon(1e-15));
  // -0.11 log2 0.11 - 0.89 log2 0.89 by hand
  const double q = 0.11;
  const double by_hand = -q * std::log(q) / std::log(2.0) - (1 - q) * std::log(1 - q) / std::log(2.0);
  CHECK(binary_entropy(Probability(q)).value == doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("binary entropy is symmetric and bounded") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double q = u(rng);
    const double h = binary_entropy(Probability(q)).value;
    CHECK(h >= 0.0);
    CHECK(h <= 1.0);
    CHECK(h == doctest::Approx(binary_entropy(Probability(1.0 - q)).value).epsilon(1e-12));
  }
}

TEST_CASE("saturating entropy caps past one half") {
  CHECK(binary_entropy_saturating(-0.1) == 0.0);
  CHECK(binary_entropy_saturating(0.5) == 1.0);
  CHECK(binary_entropy_saturating(0.7) == 1.0);
  CHECK(binary_entropy_saturating(0.2) == doctest::Approx(binary_entropy(Probability(0.2)).value));
}

TEST_CASE("fibre transmission") {
  CHECK(transmission(0.0).value() == 1.0);
  CHECK(transmission(50.0).value() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(transmission(15.0514997832).value() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(transmission(-1.0), std::invalid_argument);
  for (double d : {0.5, 4.0, 30.0, 123.0}) {
    CHECK(distance_for_transmission(transmission(d)) == doctest::Approx(d).epsilon(1e-12));
  }
  CHECK_THROWS(distance_for_transmission(Probability(0.0)));
}
