#include "eprlab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "eprlab/fourier.hpp"

namespace eprlab {

double Aperture::transmission(double x) const {
  if (kind == ApertureKind::Tophat)
    return (x >= center - 0.5 * width && x < center + 0.5 * width) ? 1.0 : 0.0;
  const double d = x - center;
  return std::exp(-d * d / (2.0 * width * width));
}

double Aperture::effective_width() const {
  return kind == ApertureKind::Tophat ? width : 2.0 * width;
}

Aperture Aperture::snapped(const Grid1D& grid) const {
  if (kind != ApertureKind::Tophat) return *this;
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    if (transmission(x) <= 0.0) continue;
    if (!any) lo = x - 0.5 * grid.dx;
    hi = x + 0.5 * grid.dx;
    any = true;
  }
  Aperture s = *this;
  if (!any) {
    s.width = 0.0;
    return s;
  }
  s.center = 0.5 * (lo + hi);
  s.width = hi - lo;
  return s;
}

std::size_t Aperture::cells_spanned(const Grid1D& grid) const {
  const double half = 0.5 * effective_width();
  std::size_t count = 0;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    if (x >= center - half && x < center + half) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------

namespace {

void check_aperture(const Aperture& a) {
  if (!(a.width > 0.0) || !std::isfinite(a.width))
    throw std::invalid_argument("aperture.width: must be > 0");
  if (!std::isfinite(a.center))
    throw std::invalid_argument("aperture.center: must be finite");
}

// Shared core: weight column j1 by `weight(x_j1) * column mass`.
ConditionalEnsemble condition_on_weights(const Field2D& field,
                                         const std::vector<double>& transmission) {
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  ConditionalEnsemble ens;
  std::vector<double> raw(n1, 0.0);
  double total = 0.0;
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    if (transmission[j1] <= 0.0) continue;
    const Complex* row = field.values.data() + j1 * n2;
    double mass = 0.0;
    for (std::size_t j2 = 0; j2 < n2; ++j2) mass += std::norm(row[j2]);
    raw[j1] = transmission[j1] * mass * field.cell2() * field.cell1();
    total += raw[j1];
  }
  if (!(total > 0.0))
    throw std::runtime_error("condition_on_slit: aperture transmits zero probability mass");
  ens.detection_probability = total;
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    if (raw[j1] <= total * 1e-15) continue;
    Field1D comp = make_field(field.grid2, field.rep2);
    const Complex* row = field.values.data() + j1 * n2;
    std::copy(row, row + n2, comp.values.begin());
    comp.normalize();
    ens.weights.push_back(raw[j1] / total);
    ens.outcomes.push_back(field.grid1.x(j1));
    ens.components.push_back(std::move(comp));
  }
  // Renormalize after dropping negligible columns.
  double wsum = 0.0;
  for (double w : ens.weights) wsum += w;
  for (double& w : ens.weights) w /= wsum;
  return ens;
}

}  // namespace

ConditionalEnsemble condition_on_slit(const Field2D& field, const Aperture& aperture) {
  check_aperture(aperture);
  if (field.rep1 != Representation::Position)
    throw std::invalid_argument("condition_on_slit: particle 1 axis must be in position representation");
  const std::size_t cells = aperture.cells_spanned(field.grid1);
  if (cells < 8)
    std::cerr << "warning: aperture spans " << cells
              << " grid cells (< 8); transmission profile is under-resolved\n";
  std::vector<double> t(field.grid1.n);
  for (std::size_t j = 0; j < field.grid1.n; ++j)
    t[j] = aperture.transmission(field.grid1.x(j));
  return condition_on_weights(field, t);
}

std::vector<double> ConditionalEnsemble::position_density() const {
  if (components.empty()) throw std::runtime_error("ensemble: no components");
  std::vector<double> out(components.front().values.size(), 0.0);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto d = components[i].density();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * d[j];
  }
  return out;
}

std::vector<double> ConditionalEnsemble::momentum_density() const {
  if (components.empty()) throw std::runtime_error("ensemble: no components");
  std::vector<double> out(components.front().values.size(), 0.0);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const Field1D mom = fourier_transform(components[i], Representation::Momentum);
    const auto d = mom.density();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * d[j];
  }
  return out;
}

DispersionReport ConditionalEnsemble::mixture_moments() const {
  const Grid1D& g = components.front().grid;
  const DensityMoments mx = density_moments(position_density(), g.dx, g.x(0), g.dx);
  const DensityMoments mp = density_moments(momentum_density(), g.dp(), g.p(0), g.dp());
  DispersionReport r;
  r.mean_x = mx.mean;
  r.std_x = std::sqrt(mx.var);
  r.mean_p = mp.mean;
  r.std_p = std::sqrt(mp.var);
  r.product = r.std_x * r.std_p;
  return r;
}

DensityMoments ConditionalEnsemble::outcome_moments() const {
  DensityMoments m;
  m.mass = 1.0;
  for (std::size_t i = 0; i < weights.size(); ++i) m.mean += weights[i] * outcomes[i];
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double d = outcomes[i] - m.mean;
    m.var += weights[i] * d * d;
  }
  return m;
}

DensityMoments ConditionalEnsemble::residual_moments() const {
  // x1 + x2 with x1 frozen at the component's outcome: law of total variance.
  const Grid1D& g = components.front().grid;
  DensityMoments m;
  m.mass = 1.0;
  std::vector<double> comp_mean(components.size());
  std::vector<double> comp_var(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const DensityMoments cm =
        density_moments(components[i].density(), g.dx, g.x(0), g.dx);
    comp_mean[i] = outcomes[i] + cm.mean;
    comp_var[i] = cm.var;
    m.mean += weights[i] * comp_mean[i];
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    const double d = comp_mean[i] - m.mean;
    m.var += weights[i] * (comp_var[i] + d * d);
  }
  return m;
}

ConditionalEnsemble ConditionalEnsemble::evolved(double t,
                                                 const PhysicalConstants& c) const {
  ConditionalEnsemble out = *this;
  for (Field1D& comp : out.components) comp = free_evolve(comp, t, c);
  return out;
}

Field1D collapse_packet_m1(const Grid1D& grid, double x1, const Aperture& aperture,
                           const PhysicalConstants& c) {
  validate(c);
  check_aperture(aperture);
  // Proposition-B packet: localized at the anticorrelated point with
  // position std a_eff/2, so std_p = hbar / a_eff exactly.
  return gaussian_packet(grid, -x1, 0.0, 0.5 * aperture.effective_width());
}

// ---------------------------------------------------------------------------

DiscreteReduction analyze_discrete(const Field2D& field, const DiscreteSpec& spec) {
  DiscreteReduction r;
  r.centers = spec.centers();
  r.masses = peak_masses(field, spec);
  double total = 0.0;
  for (double m : r.masses) total += m;
  if (!(total > 0.0)) throw std::runtime_error("reduce_discrete: zero total mass");
  for (double& m : r.masses) m /= total;
  return r;
}

std::size_t DiscreteReduction::sample(const CounterRng& rng,
                                      std::uint64_t counter) const {
  const double u = rng.uniform(counter);
  double acc = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    acc += masses[i];
    if (u < acc) return i;
  }
  return masses.size() - 1;
}

Field2D project_discrete(const Field2D& field, const DiscreteSpec& spec,
                         std::size_t outcome) {
  const auto centers = spec.centers();
  if (outcome >= centers.size())
    throw std::invalid_argument("reduce_discrete: outcome out of range");
  Field2D out = field;
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    const double x = field.grid1.x(j1);
    const double rel = (x - centers.front()) / spec.spacing;
    const auto idx = static_cast<std::size_t>(
        std::clamp<long>(std::lround(rel), 0L, static_cast<long>(centers.size()) - 1));
    if (idx != outcome)
      std::fill(out.values.begin() + j1 * n2, out.values.begin() + (j1 + 1) * n2,
                Complex{0.0, 0.0});
  }
  out.normalize();
  return out;
}

std::pair<std::size_t, Field2D> reduce_discrete(const Field2D& field,
                                                const DiscreteSpec& spec,
                                                const CounterRng& rng,
                                                std::uint64_t counter) {
  const DiscreteReduction r = analyze_discrete(field, spec);
  const std::size_t outcome = r.sample(rng, counter);
  return {outcome, project_discrete(field, spec, outcome)};
}

// ---------------------------------------------------------------------------

JointSampler::JointSampler(const Field2D& field)
    : grid1_(field.grid1), grid2_(field.grid2) {
  if (field.rep1 != Representation::Position || field.rep2 != Representation::Position)
    throw std::invalid_argument("joint_sampler: field must be in position representation");
  const std::size_t n1 = grid1_.n;
  const std::size_t n2 = grid2_.n;
  column_cdf_.assign(n1, 0.0);
  row_cdf_.assign(n1 * n2, 0.0);
  std::vector<double> mass2(n2, 0.0);
  double total = 0.0;
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    const Complex* row = field.values.data() + j1 * n2;
    double acc = 0.0;
    for (std::size_t j2 = 0; j2 < n2; ++j2) {
      const double m = std::norm(row[j2]);
      acc += m;
      mass2[j2] += m;
      row_cdf_[j1 * n2 + j2] = acc;
    }
    if (acc > 0.0) {
      const double inv = 1.0 / acc;
      for (std::size_t j2 = 0; j2 < n2; ++j2) row_cdf_[j1 * n2 + j2] *= inv;
    } else {
      std::fill(row_cdf_.begin() + j1 * n2, row_cdf_.begin() + (j1 + 1) * n2, 1.0);
    }
    total += acc;
    column_cdf_[j1] = total;
  }
  if (!(total > 0.0)) throw std::runtime_error("joint_sampler: zero norm field");
  const double inv = 1.0 / total;
  for (double& v : column_cdf_) v *= inv;
  marginal2_cdf_.resize(n2);
  double acc2 = 0.0;
  for (std::size_t j2 = 0; j2 < n2; ++j2) {
    acc2 += mass2[j2] * inv;
    marginal2_cdf_[j2] = acc2;
  }
}

JointSampler::Sample JointSampler::sample(const CounterRng& rng,
                                          std::uint64_t counter) const {
  const auto block = rng.raw(counter);
  const auto unit = [](std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
  };
  const double u0 = unit(block[0]);
  const double u1 = unit(block[1]);
  const double u2 = unit(block[2]);
  const double u3 = unit(block[3]);
  const std::size_t n2 = grid2_.n;
  const auto c0 = std::upper_bound(column_cdf_.begin(), column_cdf_.end(), u0);
  const std::size_t j1 =
      std::min<std::size_t>(static_cast<std::size_t>(c0 - column_cdf_.begin()),
                            grid1_.n - 1);
  const auto r0 = std::upper_bound(row_cdf_.begin() + j1 * n2,
                                   row_cdf_.begin() + (j1 + 1) * n2, u1);
  const std::size_t j2 = std::min<std::size_t>(
      static_cast<std::size_t>(r0 - (row_cdf_.begin() + j1 * n2)), n2 - 1);
  Sample s;
  s.j1 = j1;
  s.j2 = j2;
  s.x1 = grid1_.x(j1) + (u2 - 0.5) * grid1_.dx;
  s.x2 = grid2_.x(j2) + (u3 - 0.5) * grid2_.dx;
  return s;
}

double JointSampler::sample_marginal2(const CounterRng& rng,
                                      std::uint64_t counter) const {
  const auto block = rng.raw(counter);
  const auto unit = [](std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
  };
  const auto it = std::upper_bound(marginal2_cdf_.begin(), marginal2_cdf_.end(),
                                   unit(block[0]));
  const std::size_t j2 = std::min<std::size_t>(
      static_cast<std::size_t>(it - marginal2_cdf_.begin()), grid2_.n - 1);
  return grid2_.x(j2) + (unit(block[1]) - 0.5) * grid2_.dx;
}

// ---------------------------------------------------------------------------

double no_signaling_check(const Field2D& field, const Aperture& aperture) {
  check_aperture(aperture);
  const std::size_t n1 = field.grid1.n;
  std::vector<double> pass(n1), fail(n1);
  bool any_fail = false;
  for (std::size_t j = 0; j < n1; ++j) {
    const double t = aperture.transmission(field.grid1.x(j));
    pass[j] = t;
    fail[j] = 1.0 - t;
    if (fail[j] > 0.0) any_fail = true;
  }
  const ConditionalEnsemble detected = condition_on_weights(field, pass);
  const double p = detected.detection_probability;

  std::vector<double> sum_x = detected.position_density();
  std::vector<double> sum_p = detected.momentum_density();
  for (double& v : sum_x) v *= p;
  for (double& v : sum_p) v *= p;
  if (any_fail) {
    const ConditionalEnsemble missed = condition_on_weights(field, fail);
    const double q = missed.detection_probability;
    const auto mx = missed.position_density();
    const auto mp = missed.momentum_density();
    for (std::size_t j = 0; j < sum_x.size(); ++j) {
      sum_x[j] += q * mx[j];
      sum_p[j] += q * mp[j];
    }
  }

  const std::vector<double> marg_x = marginal(field, 2);
  const Field2D field_p = fourier_transform_axis(field, 2, Representation::Momentum);
  const std::vector<double> marg_p = marginal(field_p, 2);
  double dev = 0.0;
  for (std::size_t j = 0; j < marg_x.size(); ++j) {
    dev = std::max(dev, std::abs(sum_x[j] - marg_x[j]));
    dev = std::max(dev, std::abs(sum_p[j] - marg_p[j]));
  }
  return dev;
}

}  // namespace eprlab
