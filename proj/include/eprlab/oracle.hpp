#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "eprlab/constants.hpp"
#include "eprlab/measurement.hpp"
#include "eprlab/states.hpp"

namespace eprlab {

double normal_cdf(double z);
double normal_pdf(double z);

// Closed-form Gaussian-state description in (x1, p1, x2, p2) order. Every
// grid computation in the pipeline has a counterpart here built from moments
// algebra alone, with no lattice anywhere.
struct CovarianceState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  double hbar = 1.0;

  // Symplectic spectrum {nu_minus, nu_plus}; both equal hbar/2 iff pure.
  std::array<double, 2> symplectic_eigenvalues() const;
  bool is_pure(double tol = 1e-9) const;
};

CovarianceState epr_covariance(const EprParams& params, const PhysicalConstants& c = {});

// Free evolution x_i <- x_i + p_i t / m on means and covariance.
CovarianceState evolve_covariance(const CovarianceState& state, double t,
                                  const PhysicalConstants& c = {});
CovarianceState evolve_covariance_axis(const CovarianceState& state, double t, int axis,
                                       const PhysicalConstants& c = {});

// Exact conditionals of particle 2 given a sharp x1 readout at t = 0.
struct ConditionalMoments {
  double mean_x2 = 0.0;
  double var_x2 = 0.0;
  double var_p2 = 0.0;
};
ConditionalMoments conditional_moments(const EprParams& params, double x1,
                                       const PhysicalConstants& c = {});

// Particle-2 mixture after an aperture-resolved x1 measurement at
// measurement_time, free-evolved for a further `delay`. The x1 posterior is
// integrated by adaptive quadrature of T(c) * N(c; mean_x1, var_x1); the
// conditional slices are Gaussian, so the mixture follows from the law of
// total variance. `response` is d(mean)/d(outcome) after the delay, which is
// what residual (x1 + x2) statistics need.
struct SlitConditionedState {
  double detection_probability = 0.0;
  double outcome_mean = 0.0;
  double outcome_var = 0.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();   // (x2, p2)
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  Eigen::Vector2d response = Eigen::Vector2d::Zero();

  double std_x2() const;
  double std_p2() const;
  double residual_mean() const;  // E[x1 + x2]
  double residual_std() const;
};

SlitConditionedState slit_conditioned_state(const EprParams& params,
                                            const Aperture& aperture,
                                            double measurement_time, double delay,
                                            const PhysicalConstants& c = {});

// Adaptive Simpson integration, exposed for tests. Absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

}  // namespace eprlab
