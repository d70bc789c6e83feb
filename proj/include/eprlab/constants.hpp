#pragma once

#include <stdexcept>

namespace eprlab {

// Planck constant and particle mass in the working unit system.
// Defaults give the dimensionless convention hbar = m = 1.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
};

inline void validate(const PhysicalConstants& c) {
  if (!(c.hbar > 0.0)) throw std::invalid_argument("constants: hbar must be > 0");
  if (!(c.mass > 0.0)) throw std::invalid_argument("constants: mass must be > 0");
}

}  // namespace eprlab
