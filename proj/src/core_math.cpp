#include "ghzkey/core_math.hpp"

#include <cmath>

namespace ghzkey {

namespace {
constexpr double kLossDbPerKmOverTen = 0.02;
}

EntropyBits binary_entropy(Probability q) {
  const double x = q.value();
  if (x <= 0.0 || x >= 1.0) return {0.0};
  return {-x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x)};
}

double binary_entropy_saturating(double q) {
  if (q <= 0.0) return 0.0;
  if (q >= 0.5) return 1.0;
  return binary_entropy(Probability(q)).value;
}

Probability transmission(double distance_km) {
  if (!(distance_km >= 0.0)) {
    throw std::invalid_argument("distance must be non-negative");
  }
  return Probability(std::pow(10.0, -kLossDbPerKmOverTen * distance_km));
}

double distance_for_transmission(Probability p) {
  if (p.value() <= 0.0) throw std::invalid_argument("zero transmission has no finite distance");
  return -std::log10(p.value()) / kLossDbPerKmOverTen;
}

}  // namespace ghzkey
