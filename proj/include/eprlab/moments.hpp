#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eprlab/field.hpp"

namespace eprlab {

// Position and momentum dispersion of a normalized single-particle state.
// product = std_x * std_p, bounded below by hbar/2.
struct DispersionReport {
  double mean_x = 0.0;
  double std_x = 0.0;
  double mean_p = 0.0;
  double std_p = 0.0;
  double product = 0.0;
};

// Mean and variance of a (sub-normalized) density sampled on a lattice.
struct DensityMoments {
  double mass = 0.0;
  double mean = 0.0;
  double var = 0.0;
};

DensityMoments density_moments(const std::vector<double>& density, double cell,
                               double coord0, double step);

// Requires |norm^2 - 1| <= 1e-6; computes both representations via one
// transform of a copy.
DispersionReport moments(const Field1D& field);

// Probability density of one particle's coordinate, other particle traced
// out. Length n of the requested axis; integrates to 1 for normalized fields.
std::vector<double> marginal(const Field2D& field, int axis);

// Largest |psi|^2 over the outermost cells of the lattice in the field's own
// representation; used by the boundary/no-aliasing guards.
double boundary_density_max(const Field1D& field);
double boundary_density_max(const Field2D& field);

// Mean vector and symmetrized covariance of (x1, p1, x2, p2) extracted from
// the wavefunction by quadrature + single-axis transforms. Cross blocks use
// Re<x_a psi | p_b psi>; the diagonal x-p entries are the Weyl-symmetrized
// Re<x psi | p psi> - <x><p>.
Eigen::Vector4d mean_vector(const Field2D& field);
Eigen::Matrix4d covariance_matrix(const Field2D& field);

}  // namespace eprlab
