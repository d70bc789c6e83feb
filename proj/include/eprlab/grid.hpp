#pragma once

#include <cstddef>

#include "eprlab/constants.hpp"

namespace eprlab {

// Uniform position lattice x_j = x_min + j*dx, j = 0..n-1, together with its
// Fourier-dual momentum lattice p_k = (k - n/2)*dp. The duality relation
// dp * dx * n = 2*pi*hbar is exact by construction, which is what makes the
// discrete transform in fourier.hpp exactly unitary.
struct Grid1D {
  std::size_t n = 0;
  double x_min = 0.0;
  double dx = 0.0;
  double hbar = 1.0;

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
  double x_max() const { return x_min + static_cast<double>(n) * dx; }
  double dp() const;
  double p(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(n) / 2.0) * dp();
  }
  // Magnitude of the momentum lattice edge, (n/2)*dp.
  double p_max() const { return static_cast<double>(n) / 2.0 * dp(); }

  bool operator==(const Grid1D&) const = default;
};

// n must be an even power of two; x_max > x_min. dx is derived as (x_max - x_min)/n,
// so the half-open domain [x_min, x_max) is tiled exactly.
Grid1D make_grid(std::size_t n, double x_min, double x_max,
                 const PhysicalConstants& constants = {});

}  // namespace eprlab
