#pragma once

#include <array>
#include <cstdint>

namespace eprlab {

// Deterministic local strategy: fixed +-1 answers for each of the two
// settings on each side.
struct LhvStrategy {
  std::array<int, 2> alice{1, 1};
  std::array<int, 2> bob{1, 1};

  double chsh() const {
    const double e11 = alice[0] * bob[0];
    const double e12 = alice[0] * bob[1];
    const double e21 = alice[1] * bob[0];
    const double e22 = alice[1] * bob[1];
    return e11 + e12 + e21 - e22;
  }
};

struct LhvEnumeration {
  std::array<LhvStrategy, 16> strategies;
  std::array<double, 16> values;  // S per strategy
  double max_abs = 0.0;
  int count_at_max = 0;  // strategies attaining S == +max_abs
};

// All 16 deterministic strategies; |S| = 2 for every one of them.
LhvEnumeration enumerate_lhv();

// Singlet correlation E(a, b) = -cos(a - b) for analyzer angles in radians.
double singlet_correlation(double angle_a, double angle_b);

double chsh_value(double e11, double e12, double e21, double e22);

// CHSH at the standard angles a = 0, a' = pi/2, b = pi/4, b' = -pi/4;
// |S| = 2*sqrt(2).
double singlet_chsh_standard();

}  // namespace eprlab
