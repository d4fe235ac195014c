// Deterministic seeded RNG helpers for sampling-based checks.
#pragma once

#include <cstdint>
#include <random>

#include "cstab/rational.hpp"

namespace cstab {

struct Rng {
  std::mt19937_64 gen;

  explicit Rng(unsigned seed) : gen(seed) {}

  long long intIn(long long lo, long long hi) {
    std::uniform_int_distribution<long long> d(lo, hi);
    return d(gen);
  }

  double realIn(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen);
  }

  // Rational with numerator in [-num, num] and denominator in [1, den].
  Rat smallRational(long long num = 1000, long long den = 20) {
    return Rat(intIn(-num, num), intIn(1, den));
  }

  Rat positiveRational(long long num = 40, long long den = 12) {
    return Rat(intIn(1, num), intIn(1, den));
  }

  // Nonzero rational, handy for torus points.
  Rat nonzeroRational(long long num = 30, long long den = 8) {
    Rat r;
    do {
      r = smallRational(num, den);
    } while (r == 0);
    return r;
  }
};

}  // namespace cstab
