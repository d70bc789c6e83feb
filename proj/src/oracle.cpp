#include "eprlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eprlab {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive(f, a, b, fa, fm, fb, whole, abs_tol, 48);
}

// ---------------------------------------------------------------------------

std::array<double, 2> CovarianceState::symplectic_eigenvalues() const {
  // Eigenvalues of Omega*Sigma come in pairs +-i*nu. Reading nu off the
  // spectrum stays accurate for strongly squeezed states, where the
  // Delta/determinant closed form cancels catastrophically.
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(omega * cov, false);
  std::array<double, 4> mags{};
  for (int i = 0; i < 4; ++i) mags[i] = std::abs(solver.eigenvalues()(i));
  std::sort(mags.begin(), mags.end());
  return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])};
}

bool CovarianceState::is_pure(double tol) const {
  const auto nu = symplectic_eigenvalues();
  return std::abs(nu[0] - 0.5 * hbar) <= tol * hbar &&
         std::abs(nu[1] - 0.5 * hbar) <= tol * hbar;
}

CovarianceState epr_covariance(const EprParams& params, const PhysicalConstants& c) {
  validate(c);
  if (!(params.sigma_plus > 0.0)) throw std::invalid_argument("state.sigma_plus: must be > 0");
  if (!(params.sigma_minus > 0.0)) throw std::invalid_argument("state.sigma_minus: must be > 0");
  const double sp2 = params.sigma_plus * params.sigma_plus;
  const double sm2 = params.sigma_minus * params.sigma_minus;
  const double h2 = c.hbar * c.hbar;
  CovarianceState s;
  s.hbar = c.hbar;
  const double vx = (sp2 + sm2) / 4.0;
  const double cx = (sp2 - sm2) / 4.0;
  const double vp = h2 / 4.0 * (1.0 / sp2 + 1.0 / sm2);
  const double cp = h2 / 4.0 * (1.0 / sp2 - 1.0 / sm2);
  s.cov(0, 0) = s.cov(2, 2) = vx;
  s.cov(1, 1) = s.cov(3, 3) = vp;
  s.cov(0, 2) = s.cov(2, 0) = cx;
  s.cov(1, 3) = s.cov(3, 1) = cp;
  return s;
}

CovarianceState evolve_covariance_axis(const CovarianceState& state, double t,
                                       int axis, const PhysicalConstants& c) {
  validate(c);
  if (axis != 1 && axis != 2)
    throw std::invalid_argument("evolve_covariance_axis: axis must be 1 or 2");
  Eigen::Matrix4d S = Eigen::Matrix4d::Identity();
  const int row = axis == 1 ? 0 : 2;
  S(row, row + 1) = t / c.mass;
  CovarianceState out = state;
  out.mean = S * state.mean;
  out.cov = S * state.cov * S.transpose();
  return out;
}

CovarianceState evolve_covariance(const CovarianceState& state, double t,
                                  const PhysicalConstants& c) {
  return evolve_covariance_axis(evolve_covariance_axis(state, t, 1, c), t, 2, c);
}

ConditionalMoments conditional_moments(const EprParams& params, double x1,
                                       const PhysicalConstants& c) {
  const CovarianceState s = epr_covariance(params, c);
  const double vx1 = s.cov(0, 0);
  const Eigen::Vector2d beta(s.cov(2, 0) / vx1, s.cov(3, 0) / vx1);
  ConditionalMoments m;
  m.mean_x2 = beta(0) * x1;
  m.var_x2 = s.cov(2, 2) - beta(0) * beta(0) * vx1;
  m.var_p2 = s.cov(3, 3) - beta(1) * beta(1) * vx1;
  return m;
}

double SlitConditionedState::std_x2() const { return std::sqrt(cov(0, 0)); }
double SlitConditionedState::std_p2() const { return std::sqrt(cov(1, 1)); }

double SlitConditionedState::residual_mean() const { return outcome_mean + mean(0); }

double SlitConditionedState::residual_std() const {
  // r = c + x2(tau) with x2(tau) = response_x * c + noise:
  // Var r = Sxx + (1 + response_x)^2 Var c, and cov(0,0) already holds
  // Sxx + response_x^2 Var c.
  return std::sqrt(cov(0, 0) + outcome_var * (1.0 + 2.0 * response(0)));
}

SlitConditionedState slit_conditioned_state(const EprParams& params,
                                            const Aperture& aperture,
                                            double measurement_time, double delay,
                                            const PhysicalConstants& c) {
  if (!(aperture.width > 0.0))
    throw std::invalid_argument("aperture.width: must be > 0");
  const CovarianceState at_meas =
      evolve_covariance(epr_covariance(params, c), measurement_time, c);
  const double mu1 = at_meas.mean(0);
  const double v1 = at_meas.cov(0, 0);
  const double s1 = std::sqrt(v1);

  // Aperture-weighted x1 posterior, integrated by adaptive Simpson.
  const auto weight = [&](double x) {
    return aperture.transmission(x) * normal_pdf((x - mu1) / s1) / s1;
  };
  double lo, hi;
  if (aperture.kind == ApertureKind::Tophat) {
    lo = aperture.center - 0.5 * aperture.width;
    hi = aperture.center + 0.5 * aperture.width;
  } else {
    lo = std::min(aperture.center - 10.0 * aperture.width, mu1 - 10.0 * s1);
    hi = std::max(aperture.center + 10.0 * aperture.width, mu1 + 10.0 * s1);
  }
  const double tol = 1e-14 * (1.0 + std::abs(hi - lo));
  const double p = integrate(weight, lo, hi, tol);
  if (!(p > 0.0))
    throw std::runtime_error("slit_conditioned_state: aperture transmits zero mass");
  const double m1 =
      integrate([&](double x) { return x * weight(x); }, lo, hi, tol) / p;
  const double m2 =
      integrate([&](double x) { return (x - m1) * (x - m1) * weight(x); }, lo, hi,
                tol) /
      p;

  // Homodyne conditioning on x1 at the measurement plane, then a particle-2
  // shear for the delay.
  const Eigen::Vector2d b(at_meas.cov(2, 0) / v1, at_meas.cov(3, 0) / v1);
  Eigen::Matrix2d sigma_b = at_meas.cov.block<2, 2>(2, 2) - v1 * b * b.transpose();
  Eigen::Vector2d mu_b(at_meas.mean(2), at_meas.mean(3));
  Eigen::Matrix2d shear = Eigen::Matrix2d::Identity();
  shear(0, 1) = delay / c.mass;
  const Eigen::Vector2d response = shear * b;
  SlitConditionedState out;
  out.detection_probability = p;
  out.outcome_mean = m1;
  out.outcome_var = m2;
  out.response = response;
  out.mean = shear * mu_b + response * (m1 - mu1);
  out.cov = shear * sigma_b * shear.transpose() + m2 * response * response.transpose();
  return out;
}

}  // namespace eprlab
