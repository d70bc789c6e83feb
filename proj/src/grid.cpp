#include "eprlab/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eprlab {

double Grid1D::dp() const {
  return 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * dx);
}

Grid1D make_grid(std::size_t n, double x_min, double x_max,
                 const PhysicalConstants& constants) {
  validate(constants);
  if (n < 2 || !std::has_single_bit(n))
    throw std::invalid_argument("grid.n: must be a power of two >= 2");
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("grid.x_min/x_max: must be finite");
  if (!(x_max > x_min))
    throw std::invalid_argument("grid.x_max: must be > x_min");
  Grid1D g;
  g.n = n;
  g.x_min = x_min;
  g.dx = (x_max - x_min) / static_cast<double>(n);
  g.hbar = constants.hbar;
  return g;
}

}  // namespace eprlab
