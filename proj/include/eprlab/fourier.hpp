#pragma once

#include "eprlab/field.hpp"

namespace eprlab {

// Unitary discrete realization of the symmetric continuum transform
//   phi(p) = (2*pi*hbar)^(-1/2) Integral dx e^(-i p x / hbar) psi(x).
// Forward (position -> momentum):
//   phi_k = dx/sqrt(2*pi*hbar) * e^(-i p_k x_min/hbar) * FFT[psi_j * (-1)^j]_k
// with p_k = (k - n/2)*dp. The inverse applies the conjugate phases; because
// dp*dx*n = 2*pi*hbar the round trip is exact to machine precision, as is
// Parseval (sum |psi|^2 dx == sum |phi|^2 dp).
//
// `target` names the representation to transform into; passing the field's
// current representation is an error (representation mismatch).
Field1D fourier_transform(const Field1D& field, Representation target);

// Transform one axis (1 or 2) of a two-particle field; the other axis is
// untouched. Unitary per axis, so mixed-representation fields stay normalized.
Field2D fourier_transform_axis(const Field2D& field, int axis, Representation target);

// Transform both axes.
Field2D fourier_transform(const Field2D& field, Representation target);

}  // namespace eprlab
