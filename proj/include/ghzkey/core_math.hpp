#pragma once

#include <stdexcept>
#include <string>

namespace ghzkey {

/// A real number in [0, 1]. Construction rejects anything outside that range,
/// so code receiving a Probability never re-validates it.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("probability out of range [0,1]: " + std::to_string(v));
    }
  }

  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }

  constexpr Probability complement() const {
    Probability p;
    p.value_ = 1.0 - value_;
    return p;
  }

 private:
  double value_ = 0.0;
};

/// Entropy in bits. Binary entropy values lie in [0, 1].
struct EntropyBits {
  double value = 0.0;
  constexpr operator double() const { return value; }
};

/// h2(q) = -q log2 q - (1-q) log2 (1-q), with 0 log 0 = 0.
EntropyBits binary_entropy(Probability q);

/// Binary entropy of an effective error rate that may have been pushed past
/// 1/2 by a statistical penalty. Values >= 1/2 saturate at one bit.
double binary_entropy_saturating(double q);

/// Fibre transmission 10^(-0.02 d) for a link of d kilometres.
Probability transmission(double distance_km);

/// Distance in km at which the transmission equals p (inverse of transmission).
double distance_for_transmission(Probability p);

}  // namespace ghzkey
