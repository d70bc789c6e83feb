#include "eprlab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "eprlab/fourier.hpp"

namespace eprlab {

namespace {

void check_time(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("evolve.t: must be finite");
}

void check_hbar(const Grid1D& g, const PhysicalConstants& c) {
  if (g.hbar != c.hbar)
    throw std::invalid_argument("constants.hbar: must match the grid's hbar");
}

// exp(-i p^2 t / (2 m hbar)) applied to one momentum-representation axis.
void kinetic_phase(Complex* values, std::size_t stride, std::size_t count,
                   const Grid1D& g, double t, const PhysicalConstants& c,
                   std::size_t axis_index_stride) {
  const double coef = -t / (2.0 * c.mass * c.hbar);
  for (std::size_t k = 0; k < g.n; ++k) {
    const double p = g.p(k);
    const double arg = coef * p * p;
    const Complex ph{std::cos(arg), std::sin(arg)};
    Complex* base = values + k * axis_index_stride;
    for (std::size_t r = 0; r < count; ++r) base[r * stride] *= ph;
  }
}

}  // namespace

Field1D free_evolve(const Field1D& field, double t, const PhysicalConstants& c) {
  validate(c);
  check_time(t);
  check_hbar(field.grid, c);
  const bool from_position = field.rep == Representation::Position;
  Field1D mom = from_position ? fourier_transform(field, Representation::Momentum)
                              : field;
  kinetic_phase(mom.values.data(), 1, 1, mom.grid, t, c, 1);
  return from_position ? fourier_transform(mom, Representation::Position)
                       : mom;
}

Field2D free_evolve_axis(const Field2D& field, double t, int axis,
                         const PhysicalConstants& c) {
  validate(c);
  check_time(t);
  if (axis != 1 && axis != 2)
    throw std::invalid_argument("free_evolve_axis: axis must be 1 or 2");
  const Grid1D& g = axis == 1 ? field.grid1 : field.grid2;
  check_hbar(g, c);
  const Representation original = axis == 1 ? field.rep1 : field.rep2;
  const bool from_position = original == Representation::Position;
  Field2D mom = from_position
                    ? fourier_transform_axis(field, axis, Representation::Momentum)
                    : field;
  const std::size_t n2 = field.grid2.n;
  if (axis == 2) {
    // Momentum index contiguous; iterate rows as the repeat dimension.
    kinetic_phase(mom.values.data(), n2, field.grid1.n, g, t, c, 1);
  } else {
    kinetic_phase(mom.values.data(), 1, n2, g, t, c, n2);
  }
  return from_position ? fourier_transform_axis(mom, axis, Representation::Position)
                       : mom;
}

Field2D free_evolve(const Field2D& field, double t, const PhysicalConstants& c) {
  return free_evolve_axis(free_evolve_axis(field, t, 1, c), t, 2, c);
}

double spread_law(double sigma0, double t, const PhysicalConstants& c) {
  validate(c);
  if (!(sigma0 > 0.0)) throw std::invalid_argument("spread_law.sigma0: must be > 0");
  check_time(t);
  const double rate = c.hbar * t / (2.0 * c.mass * sigma0);
  return std::sqrt(sigma0 * sigma0 + rate * rate);
}

double angular_width(double std_x, double t, const ParaxialGeometry& geometry) {
  if (!(geometry.longitudinal_speed > 0.0))
    throw std::invalid_argument("geometry.longitudinal_speed: must be > 0");
  if (!(std_x >= 0.0)) throw std::invalid_argument("angular_width.std_x: must be >= 0");
  const double flight = geometry.longitudinal_speed * (t - geometry.source_time);
  if (flight <= 0.0) return std::nan("");
  return std_x / flight;
}

}  // namespace eprlab
