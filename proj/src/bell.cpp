#include "eprlab/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eprlab {

LhvEnumeration enumerate_lhv() {
  LhvEnumeration e;
  for (int i = 0; i < 16; ++i) {
    LhvStrategy s;
    s.alice[0] = (i & 8) ? -1 : 1;
    s.alice[1] = (i & 4) ? -1 : 1;
    s.bob[0] = (i & 2) ? -1 : 1;
    s.bob[1] = (i & 1) ? -1 : 1;
    e.strategies[i] = s;
    e.values[i] = s.chsh();
    e.max_abs = std::max(e.max_abs, std::abs(e.values[i]));
  }
  for (double v : e.values)
    if (v == e.max_abs) ++e.count_at_max;
  return e;
}

double singlet_correlation(double angle_a, double angle_b) {
  return -std::cos(angle_a - angle_b);
}

double chsh_value(double e11, double e12, double e21, double e22) {
  return e11 + e12 + e21 - e22;
}

double singlet_chsh_standard() {
  const double a0 = 0.0;
  const double a1 = 0.5 * std::numbers::pi;
  const double b0 = 0.25 * std::numbers::pi;
  const double b1 = -0.25 * std::numbers::pi;
  return std::abs(chsh_value(singlet_correlation(a0, b0), singlet_correlation(a0, b1),
                             singlet_correlation(a1, b0),
                             singlet_correlation(a1, b1)));
}

}  // namespace eprlab
