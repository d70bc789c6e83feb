#include "eprlab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eprlab/fourier.hpp"
#include "eprlab/moments.hpp"

namespace eprlab {

namespace {

constexpr double kBoundaryTol = 1e-8;

void check_boundaries(const Field1D& f, const char* who) {
  if (boundary_density_max(f) > kBoundaryTol)
    throw std::invalid_argument(std::string(who) +
                                ": state density touches the grid boundary");
  Field1D other = fourier_transform(
      f, f.rep == Representation::Position ? Representation::Momentum
                                           : Representation::Position);
  if (boundary_density_max(other) > kBoundaryTol)
    throw std::invalid_argument(std::string(who) +
                                ": state density touches the momentum boundary");
}

}  // namespace

double EprParams::correlation_quality() const {
  const double sp2 = sigma_plus * sigma_plus;
  const double sm2 = sigma_minus * sigma_minus;
  return std::abs(sp2 - sm2) / (sp2 + sm2);
}

std::vector<double> DiscreteSpec::centers() const {
  std::vector<double> c(terms);
  const double offset = 0.5 * static_cast<double>(terms - 1);
  for (std::size_t i = 0; i < terms; ++i)
    c[i] = spacing * (static_cast<double>(i) - offset);
  return c;
}

Field1D gaussian_packet(const Grid1D& grid, double x0, double p0, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("packet.sigma: must be > 0");
  if (sigma < 2.0 * grid.dx)
    throw std::invalid_argument("packet.sigma: must be >= 2*dx for the grid to resolve it");
  if (!std::isfinite(x0) || !std::isfinite(p0))
    throw std::invalid_argument("packet.x0/p0: must be finite");
  Field1D f = make_field(grid, Representation::Position);
  const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double d = grid.x(j) - x0;
    const double envelope = amp * std::exp(-d * d / (4.0 * sigma * sigma));
    const double phase = p0 * d / grid.hbar;
    f.values[j] = envelope * Complex{std::cos(phase), std::sin(phase)};
  }
  f.normalize();
  check_boundaries(f, "gaussian_packet");
  return f;
}

Field2D epr_pair(const Grid1D& grid1, const Grid1D& grid2, const EprParams& params) {
  if (!(params.sigma_plus > 0.0) || !std::isfinite(params.sigma_plus))
    throw std::invalid_argument("state.sigma_plus: must be > 0");
  if (!(params.sigma_minus > 0.0) || !std::isfinite(params.sigma_minus))
    throw std::invalid_argument("state.sigma_minus: must be > 0");
  // Marginal widths per axis; both the position extent and the momentum
  // lattice must hold at least 4 standard deviations.
  const double sp2 = params.sigma_plus * params.sigma_plus;
  const double sm2 = params.sigma_minus * params.sigma_minus;
  const double std_x = std::sqrt((sp2 + sm2) / 4.0);
  for (const Grid1D* g : {&grid1, &grid2}) {
    const double std_p = 0.5 * g->hbar * std::sqrt(1.0 / sp2 + 1.0 / sm2);
    const double half_extent = 0.5 * (g->x_max() - g->x_min);
    if (half_extent < 4.0 * std_x)
      throw std::invalid_argument("grid: extent below 4 position std of the pair");
    if (g->p_max() < 4.0 * std_p)
      throw std::invalid_argument("grid: momentum extent below 4 momentum std of the pair");
  }
  Field2D f = make_field(grid1, grid2);
  const double inv_p = 1.0 / (4.0 * sp2);
  const double inv_m = 1.0 / (4.0 * sm2);
  for (std::size_t j1 = 0; j1 < grid1.n; ++j1) {
    const double x1 = grid1.x(j1);
    Complex* row = f.values.data() + j1 * grid2.n;
    for (std::size_t j2 = 0; j2 < grid2.n; ++j2) {
      const double x2 = grid2.x(j2);
      const double u = x1 + x2;
      const double w = x1 - x2;
      row[j2] = std::exp(-u * u * inv_p - w * w * inv_m);
    }
  }
  f.normalize();
  if (boundary_density_max(f) > kBoundaryTol)
    throw std::invalid_argument("epr_pair: state density touches the grid boundary");
  const Field2D mom = fourier_transform(f, Representation::Momentum);
  if (boundary_density_max(mom) > kBoundaryTol)
    throw std::invalid_argument("epr_pair: state density touches the momentum boundary");
  return f;
}

Field2D discrete_entangled(const Grid1D& grid1, const Grid1D& grid2,
                           const DiscreteSpec& spec) {
  if (spec.terms < 2) throw std::invalid_argument("state.terms: must be >= 2");
  if (!(spec.spacing > 0.0)) throw std::invalid_argument("state.spacing: must be > 0");
  if (!(spec.peak_sigma > 0.0))
    throw std::invalid_argument("state.peak_sigma: must be > 0");
  if (spec.peak_sigma < 2.0 * grid1.dx || spec.peak_sigma < 2.0 * grid2.dx)
    throw std::invalid_argument("state.peak_sigma: must be >= 2*dx");
  if (spec.spacing < 6.0 * spec.peak_sigma)
    throw std::invalid_argument(
        "state.spacing: must be >= 6*peak_sigma so peaks stay resolvable");
  const auto centers = spec.centers();
  // Outermost peaks (at +-c on either axis) need 4 sigma of clearance, or
  // their mass silently truncates and the peaks stop being equally weighted.
  const double reach = std::abs(centers.back()) + 4.0 * spec.peak_sigma;
  for (const Grid1D* g : {&grid1, &grid2})
    if (reach > -g->x_min || reach > g->x_max())
      throw std::invalid_argument("state.terms: comb does not fit the grid");
  Field2D f = make_field(grid1, grid2);
  // sum_i g(x1 - c_i) g(x2 + c_i): registering particle 1 at peak c pins the
  // partner at -c, the same anticorrelation the continuum pair carries.
  std::vector<double> g1(grid1.n), g2(grid2.n);
  for (double c : centers) {
    const double inv = 1.0 / (4.0 * spec.peak_sigma * spec.peak_sigma);
    for (std::size_t j = 0; j < grid1.n; ++j) {
      const double d = grid1.x(j) - c;
      g1[j] = std::exp(-d * d * inv);
    }
    for (std::size_t j = 0; j < grid2.n; ++j) {
      const double d = grid2.x(j) + c;
      g2[j] = std::exp(-d * d * inv);
    }
    for (std::size_t j1 = 0; j1 < grid1.n; ++j1) {
      if (g1[j1] == 0.0) continue;
      Complex* row = f.values.data() + j1 * grid2.n;
      for (std::size_t j2 = 0; j2 < grid2.n; ++j2) row[j2] += g1[j1] * g2[j2];
    }
  }
  f.normalize();
  if (boundary_density_max(f) > kBoundaryTol)
    throw std::invalid_argument("discrete_entangled: comb does not fit the grid");
  return f;
}

std::vector<double> peak_masses(const Field2D& field, const DiscreteSpec& spec) {
  const auto centers = spec.centers();
  std::vector<double> masses(centers.size(), 0.0);
  const std::vector<double> rho = marginal(field, 1);
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double x = field.grid1.x(j);
    // Nearest comb center; the comb is uniform so this is a direct index.
    const double rel = (x - centers.front()) / spec.spacing;
    const auto i = static_cast<std::size_t>(
        std::clamp<long>(std::lround(rel), 0L, static_cast<long>(centers.size()) - 1));
    masses[i] += rho[j] * field.grid1.dx;
  }
  return masses;
}

}  // namespace eprlab
