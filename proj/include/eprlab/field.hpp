#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "eprlab/grid.hpp"

namespace eprlab {

using Complex = std::complex<double>;

enum class Representation { Position, Momentum };

// Complex amplitudes sampled on a Grid1D lattice, tagged with the
// representation they live in. Norms are discrete integrals: the cell size
// is dx in position space and dp in momentum space.
struct Field1D {
  Grid1D grid;
  Representation rep = Representation::Position;
  std::vector<Complex> values;

  double cell() const { return rep == Representation::Position ? grid.dx : grid.dp(); }
  double coord(std::size_t j) const {
    return rep == Representation::Position ? grid.x(j) : grid.p(j);
  }
  double squared_norm() const;
  // |values|^2; integrates (sum * cell) to squared_norm().
  std::vector<double> density() const;
  Field1D& normalize();
};

// Two-particle amplitude on the product lattice, row-major with particle 2
// contiguous: values[j1 * grid2.n + j2]. The two axes carry independent
// representation tags so single-axis transforms are well defined.
struct Field2D {
  Grid1D grid1;
  Grid1D grid2;
  Representation rep1 = Representation::Position;
  Representation rep2 = Representation::Position;
  std::vector<Complex> values;

  std::size_t index(std::size_t j1, std::size_t j2) const { return j1 * grid2.n + j2; }
  Complex& at(std::size_t j1, std::size_t j2) { return values[index(j1, j2)]; }
  const Complex& at(std::size_t j1, std::size_t j2) const { return values[index(j1, j2)]; }
  double cell1() const { return rep1 == Representation::Position ? grid1.dx : grid1.dp(); }
  double cell2() const { return rep2 == Representation::Position ? grid2.dx : grid2.dp(); }
  double squared_norm() const;
  Field2D& normalize();
};

Field1D make_field(const Grid1D& grid, Representation rep = Representation::Position);
Field2D make_field(const Grid1D& grid1, const Grid1D& grid2);

}  // namespace eprlab
