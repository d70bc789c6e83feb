#include "eprlab/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "eprlab/fourier.hpp"

namespace eprlab {

DensityMoments density_moments(const std::vector<double>& density, double cell,
                               double coord0, double step) {
  DensityMoments m;
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double w = density[j] * cell;
    m.mass += w;
    m.mean += w * (coord0 + step * static_cast<double>(j));
  }
  if (m.mass <= 0.0) throw std::runtime_error("density_moments: zero mass");
  m.mean /= m.mass;
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double d = coord0 + step * static_cast<double>(j) - m.mean;
    m.var += density[j] * cell * d * d;
  }
  m.var /= m.mass;
  return m;
}

namespace {

DensityMoments field_moments(const Field1D& f) {
  const double c0 = f.rep == Representation::Position ? f.grid.x(0) : f.grid.p(0);
  const double step = f.rep == Representation::Position ? f.grid.dx : f.grid.dp();
  return density_moments(f.density(), f.cell(), c0, step);
}

}  // namespace

DispersionReport moments(const Field1D& field) {
  if (std::abs(field.squared_norm() - 1.0) > 1e-6)
    throw std::invalid_argument("moments: field must be normalized to 1e-6");
  const Field1D* pos = &field;
  const Field1D* mom = &field;
  Field1D other = fourier_transform(
      field, field.rep == Representation::Position ? Representation::Momentum
                                                   : Representation::Position);
  (field.rep == Representation::Position ? mom : pos) = &other;
  const DensityMoments mx = field_moments(*pos);
  const DensityMoments mp = field_moments(*mom);
  DispersionReport r;
  r.mean_x = mx.mean;
  r.std_x = std::sqrt(mx.var);
  r.mean_p = mp.mean;
  r.std_p = std::sqrt(mp.var);
  r.product = r.std_x * r.std_p;
  return r;
}

std::vector<double> marginal(const Field2D& field, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("marginal: axis must be 1 or 2");
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  std::vector<double> out(axis == 1 ? n1 : n2, 0.0);
  const double other_cell = axis == 1 ? field.cell2() : field.cell1();
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    const Complex* row = field.values.data() + j1 * n2;
    if (axis == 1) {
      double s = 0.0;
      for (std::size_t j2 = 0; j2 < n2; ++j2) s += std::norm(row[j2]);
      out[j1] = s * other_cell;
    } else {
      for (std::size_t j2 = 0; j2 < n2; ++j2) out[j2] += std::norm(row[j2]) * other_cell;
    }
  }
  return out;
}

double boundary_density_max(const Field1D& field) {
  if (field.values.empty()) return 0.0;
  return std::max(std::norm(field.values.front()), std::norm(field.values.back()));
}

double boundary_density_max(const Field2D& field) {
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  double m = 0.0;
  for (std::size_t j2 = 0; j2 < n2; ++j2) {
    m = std::max(m, std::norm(field.at(0, j2)));
    m = std::max(m, std::norm(field.at(n1 - 1, j2)));
  }
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    m = std::max(m, std::norm(field.at(j1, 0)));
    m = std::max(m, std::norm(field.at(j1, n2 - 1)));
  }
  return m;
}

namespace {

// p_a applied to a position-representation field, returned in position rep.
Field2D momentum_applied(const Field2D& f, int axis) {
  Field2D mom = fourier_transform_axis(f, axis, Representation::Momentum);
  const Grid1D& g = axis == 1 ? mom.grid1 : mom.grid2;
  const std::size_t n1 = mom.grid1.n;
  const std::size_t n2 = mom.grid2.n;
  for (std::size_t j1 = 0; j1 < n1; ++j1)
    for (std::size_t j2 = 0; j2 < n2; ++j2)
      mom.at(j1, j2) *= g.p(axis == 1 ? j1 : j2);
  return fourier_transform_axis(mom, axis, Representation::Position);
}

}  // namespace

Eigen::Vector4d mean_vector(const Field2D& field) {
  if (field.rep1 != Representation::Position || field.rep2 != Representation::Position)
    throw std::invalid_argument("mean_vector: field must be in position representation");
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  const double cell = field.cell1() * field.cell2();
  const Field2D p1f = momentum_applied(field, 1);
  const Field2D p2f = momentum_applied(field, 2);
  double mx1 = 0.0, mx2 = 0.0, mp1 = 0.0, mp2 = 0.0;
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    const double x1 = field.grid1.x(j1);
    for (std::size_t j2 = 0; j2 < n2; ++j2) {
      const std::size_t i = j1 * n2 + j2;
      const double d = std::norm(field.values[i]);
      mx1 += d * x1;
      mx2 += d * field.grid2.x(j2);
      const Complex cpsi = std::conj(field.values[i]);
      mp1 += (cpsi * p1f.values[i]).real();
      mp2 += (cpsi * p2f.values[i]).real();
    }
  }
  return Eigen::Vector4d(mx1 * cell, mp1 * cell, mx2 * cell, mp2 * cell);
}

Eigen::Matrix4d covariance_matrix(const Field2D& field) {
  if (field.rep1 != Representation::Position || field.rep2 != Representation::Position)
    throw std::invalid_argument(
        "covariance_matrix: field must be in position representation");
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  const double cell = field.cell1() * field.cell2();
  const Field2D p1f = momentum_applied(field, 1);
  const Field2D p2f = momentum_applied(field, 2);
  const Eigen::Vector4d mu = mean_vector(field);

  // Second moments: position block by quadrature, momentum block from
  // <p_a psi | p_b psi>, cross terms Re<x_a psi | p_b psi> (Weyl order).
  double xx11 = 0.0, xx22 = 0.0, xx12 = 0.0;
  double pp11 = 0.0, pp22 = 0.0, pp12 = 0.0;
  double xp11 = 0.0, xp22 = 0.0, xp12 = 0.0, xp21 = 0.0;
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    const double x1 = field.grid1.x(j1);
    for (std::size_t j2 = 0; j2 < n2; ++j2) {
      const std::size_t i = j1 * n2 + j2;
      const double x2 = field.grid2.x(j2);
      const double d = std::norm(field.values[i]);
      xx11 += d * x1 * x1;
      xx22 += d * x2 * x2;
      xx12 += d * x1 * x2;
      const Complex c1 = std::conj(p1f.values[i]);
      const Complex c2 = std::conj(p2f.values[i]);
      pp11 += (c1 * p1f.values[i]).real();
      pp22 += (c2 * p2f.values[i]).real();
      pp12 += (c1 * p2f.values[i]).real();
      const Complex cpsi = std::conj(field.values[i]);
      xp11 += (cpsi * p1f.values[i]).real() * x1;
      xp22 += (cpsi * p2f.values[i]).real() * x2;
      xp12 += (cpsi * p2f.values[i]).real() * x1;
      xp21 += (cpsi * p1f.values[i]).real() * x2;
    }
  }
  Eigen::Matrix4d cov;
  const double c = cell;
  cov(0, 0) = xx11 * c - mu(0) * mu(0);
  cov(2, 2) = xx22 * c - mu(2) * mu(2);
  cov(0, 2) = cov(2, 0) = xx12 * c - mu(0) * mu(2);
  cov(1, 1) = pp11 * c - mu(1) * mu(1);
  cov(3, 3) = pp22 * c - mu(3) * mu(3);
  cov(1, 3) = cov(3, 1) = pp12 * c - mu(1) * mu(3);
  cov(0, 1) = cov(1, 0) = xp11 * c - mu(0) * mu(1);
  cov(2, 3) = cov(3, 2) = xp22 * c - mu(2) * mu(3);
  cov(0, 3) = cov(3, 0) = xp12 * c - mu(0) * mu(3);
  cov(2, 1) = cov(1, 2) = xp21 * c - mu(2) * mu(1);
  return cov;
}

}  // namespace eprlab
