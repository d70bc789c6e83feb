#pragma once

#include "eprlab/constants.hpp"
#include "eprlab/field.hpp"

namespace eprlab {

// Maps evolution time to a transverse-plane distance for angular widths:
// the packet travels at longitudinal_speed from source_time.
struct ParaxialGeometry {
  double longitudinal_speed = 100.0;
  double source_time = 0.0;
};

// Free-particle propagation by multiplication with exp(-i p^2 t / (2 m hbar))
// in the momentum representation. Exact for the free Hamiltonian on the
// lattice; returns the field in its original representation. t may be
// negative (backward evolution).
Field1D free_evolve(const Field1D& field, double t, const PhysicalConstants& c = {});
Field2D free_evolve(const Field2D& field, double t, const PhysicalConstants& c = {});

// Evolve only one particle's axis; the other is untouched.
Field2D free_evolve_axis(const Field2D& field, double t, int axis,
                         const PhysicalConstants& c = {});

// Analytic width of a packet with initial position std sigma0:
// sigma(t) = sqrt(sigma0^2 + (hbar t / (2 m sigma0))^2).
double spread_law(double sigma0, double t, const PhysicalConstants& c = {});

// Paraxial angular width std_x / (v * (t - t0)). NaN at zero flight distance.
double angular_width(double std_x, double t, const ParaxialGeometry& geometry);

}  // namespace eprlab
