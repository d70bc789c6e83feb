#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eprlab/dynamics.hpp"
#include "eprlab/field.hpp"
#include "eprlab/moments.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/states.hpp"

namespace eprlab {

enum class ApertureKind { Tophat, Gaussian };

// Detector window on particle 1's axis. Tophat transmits [center - width/2,
// center + width/2) with unit amplitude; Gaussian transmits
// exp(-(x-center)^2 / (2 width^2)).
struct Aperture {
  ApertureKind kind = ApertureKind::Tophat;
  double center = 0.0;
  double width = 1.0;

  double transmission(double x) const;
  // Width entering the hbar / a_eff momentum bound: the tophat's full width,
  // or 2*width for the Gaussian profile.
  double effective_width() const;
  // The window the lattice actually realizes: transmission is sampled at cell
  // centers, so a tophat acts as the union of whole cells whose centers pass.
  // Gaussian apertures are returned unchanged.
  Aperture snapped(const Grid1D& grid) const;
  // Number of cell centers inside [center - ew/2, center + ew/2).
  std::size_t cells_spanned(const Grid1D& grid) const;
};

// Mixed state of particle 2 after particle 1 registered in the aperture:
// one normalized component per surviving x1 cell, weights summing to 1.
// outcomes[i] is the x1 cell center that produced component i.
struct ConditionalEnsemble {
  std::vector<double> weights;
  std::vector<double> outcomes;
  std::vector<Field1D> components;
  double detection_probability = 0.0;

  std::vector<double> position_density() const;
  std::vector<double> momentum_density() const;
  // Dispersion of the mixture (law of total variance over components).
  DispersionReport mixture_moments() const;
  // Mean/var of the registered x1 readout.
  DensityMoments outcome_moments() const;
  // Statistics of x1 + x2 across the ensemble (x1 frozen at its outcome,
  // x2 distributed per the matching component).
  DensityMoments residual_moments() const;
  ConditionalEnsemble evolved(double t, const PhysicalConstants& c = {}) const;
};

// Exact conditioning of the pair on a pointwise aperture measurement of x1.
// Throws if the transmitted probability mass is zero; warns (stderr) when the
// aperture spans fewer than 8 cells.
ConditionalEnsemble condition_on_slit(const Field2D& field, const Aperture& aperture);

// Nonlocal reduction ansatz: after particle 1 lands at x1 the partner is
// replaced by a minimum-uncertainty packet at the anticorrelated point -x1
// with position std a_eff/2, hence momentum std exactly hbar / a_eff.
Field1D collapse_packet_m1(const Grid1D& grid, double x1, const Aperture& aperture,
                           const PhysicalConstants& c = {});

// Projective reduction of the discrete register: probability mass per comb
// peak, counter-addressed sampling, and projection onto one peak.
struct DiscreteReduction {
  std::vector<double> centers;
  std::vector<double> masses;  // sums to ~1

  std::size_t sample(const CounterRng& rng, std::uint64_t counter) const;
};

DiscreteReduction analyze_discrete(const Field2D& field, const DiscreteSpec& spec);
Field2D project_discrete(const Field2D& field, const DiscreteSpec& spec,
                         std::size_t outcome);
std::pair<std::size_t, Field2D> reduce_discrete(const Field2D& field,
                                                const DiscreteSpec& spec,
                                                const CounterRng& rng,
                                                std::uint64_t counter);

// Draws (x1, x2) pairs from |psi|^2: column from the x1 marginal CDF, row
// from the conditional CDF, uniform smearing inside each cell. One Philox
// block per draw, so samples are addressable and order-independent.
class JointSampler {
 public:
  explicit JointSampler(const Field2D& field);

  struct Sample {
    double x1 = 0.0;
    double x2 = 0.0;
    std::size_t j1 = 0;
    std::size_t j2 = 0;
  };
  Sample sample(const CounterRng& rng, std::uint64_t counter) const;

  // x2 alone from the particle-2 marginal; one block, independent of joint
  // draws made at other counters.
  double sample_marginal2(const CounterRng& rng, std::uint64_t counter) const;

 private:
  Grid1D grid1_;
  Grid1D grid2_;
  std::vector<double> column_cdf_;
  std::vector<double> row_cdf_;  // n1 x n2, per-column conditional CDFs
  std::vector<double> marginal2_cdf_;
};

// Outcome-summed conditional statistics must reassemble the marginal: returns
// the max abs deviation between (detected + undetected) mixture densities and
// the unconditioned particle-2 densities, in both representations.
double no_signaling_check(const Field2D& field, const Aperture& aperture);

}  // namespace eprlab
