#include "eprlab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace eprlab {

double Field1D::squared_norm() const {
  double s = 0.0;
  for (const Complex& v : values) s += std::norm(v);
  return s * cell();
}

std::vector<double> Field1D::density() const {
  std::vector<double> d(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) d[j] = std::norm(values[j]);
  return d;
}

Field1D& Field1D::normalize() {
  const double n2 = squared_norm();
  if (!(n2 > 0.0)) throw std::runtime_error("field: cannot normalize zero norm");
  const double s = 1.0 / std::sqrt(n2);
  for (Complex& v : values) v *= s;
  return *this;
}

double Field2D::squared_norm() const {
  double s = 0.0;
  for (const Complex& v : values) s += std::norm(v);
  return s * cell1() * cell2();
}

Field2D& Field2D::normalize() {
  const double n2 = squared_norm();
  if (!(n2 > 0.0)) throw std::runtime_error("field: cannot normalize zero norm");
  const double s = 1.0 / std::sqrt(n2);
  for (Complex& v : values) v *= s;
  return *this;
}

Field1D make_field(const Grid1D& grid, Representation rep) {
  Field1D f;
  f.grid = grid;
  f.rep = rep;
  f.values.assign(grid.n, Complex{0.0, 0.0});
  return f;
}

Field2D make_field(const Grid1D& grid1, const Grid1D& grid2) {
  if (grid1.hbar != grid2.hbar)
    throw std::invalid_argument("field: axis grids disagree on hbar");
  Field2D f;
  f.grid1 = grid1;
  f.grid2 = grid2;
  f.values.assign(grid1.n * grid2.n, Complex{0.0, 0.0});
  return f;
}

}  // namespace eprlab
