#pragma once

#include <cstddef>
#include <vector>

#include "eprlab/field.hpp"

namespace eprlab {

// Two-mode squeezed position pair
//   psi(x1,x2) ~ exp(-(x1+x2)^2/(4 s_plus^2)) * exp(-(x1-x2)^2/(4 s_minus^2)).
// corr(x1,x2) = (s_plus^2 - s_minus^2)/(s_plus^2 + s_minus^2): the default
// s_plus << s_minus pinches x1+x2 (anticorrelated positions, correlated
// momenta), Var(x1+x2) = s_plus^2 and Var(p1-p2) = hbar^2/s_minus^2.
struct EprParams {
  double sigma_plus = 0.1;
  double sigma_minus = 10.0;

  // |corr(x1,x2)|, -> 1 in the strong-entanglement regime.
  double correlation_quality() const;
};

// Equal-weight superposition of `terms` product peaks
// sum_i g(x1 - c_i) g(x2 - c_i) with centers c_i on a symmetric comb of the
// given spacing. Models a maximally correlated discrete position register.
struct DiscreteSpec {
  std::size_t terms = 8;
  double spacing = 4.0;
  double peak_sigma = 0.25;

  std::vector<double> centers() const;
};

// Normalized Gaussian packet centered at (x0, p0) with position width sigma.
// Requires sigma >= 2*dx and negligible boundary density.
Field1D gaussian_packet(const Grid1D& grid, double x0, double p0, double sigma);

// The two-mode correlated Gaussian above, normalized on the product lattice.
// Rejects grids that cannot hold both position and momentum support.
Field2D epr_pair(const Grid1D& grid1, const Grid1D& grid2, const EprParams& params);

// The discrete superposition above, normalized. Peaks must be resolvable:
// peak_sigma >= 2*dx and spacing >= 6*peak_sigma.
Field2D discrete_entangled(const Grid1D& grid1, const Grid1D& grid2,
                           const DiscreteSpec& spec);

// Probability mass near each comb center (cells of x1 assigned to the nearest
// center). Sums to ~1 for a normalized discrete state.
std::vector<double> peak_masses(const Field2D& field, const DiscreteSpec& spec);

}  // namespace eprlab
