#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eprlab/oracle.hpp"

using namespace eprlab;

namespace {
const EprParams kEpr{0.1, 10.0};
const Aperture kSnapped{ApertureKind::Tophat, 1.9921875, 0.9375};
}  // namespace

TEST_CASE("normal distribution helpers") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-10));
  CHECK(normal_pdf(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return normal_pdf(x); }, -8.0, 8.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pair covariance closed forms") {
  const CovarianceState s = epr_covariance(kEpr);
  CHECK(s.cov(0, 0) == doctest::Approx(25.0025).epsilon(1e-14));
  CHECK(s.cov(2, 2) == doctest::Approx(25.0025).epsilon(1e-14));
  CHECK(s.cov(0, 2) == doctest::Approx(-24.9975).epsilon(1e-14));
  CHECK(s.cov(1, 1) == doctest::Approx(25.0025).epsilon(1e-14));
  CHECK(s.cov(1, 3) == doctest::Approx(24.9975).epsilon(1e-14));
  CHECK(s.cov(0, 1) == 0.0);
  // Squeezed directions: Var(x1 + x2) = sp^2, Var(p1 - p2) = hbar^2 / sm^2.
  CHECK(s.cov(0, 0) + s.cov(2, 2) + 2 * s.cov(0, 2) ==
        doctest::Approx(0.01).epsilon(1e-10));
  CHECK(s.cov(1, 1) + s.cov(3, 3) - 2 * s.cov(1, 3) ==
        doctest::Approx(0.01).epsilon(1e-10));
  const auto nu = s.symplectic_eigenvalues();
  CHECK(nu[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nu[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.is_pure());
  CovarianceState thermal = s;
  thermal.cov *= 2.0;
  CHECK_FALSE(thermal.is_pure());
  CHECK(thermal.symplectic_eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("covariance evolution is symplectic") {
  const CovarianceState s0 = epr_covariance(kEpr);
  const CovarianceState s1 = evolve_covariance(s0, 1.0);
  CHECK(s1.cov(0, 0) == doctest::Approx(50.005).epsilon(1e-12));
  CHECK(s1.cov(1, 1) == doctest::Approx(25.0025).epsilon(1e-14));
  CHECK(s1.is_pure());
  const auto nu = s1.symplectic_eigenvalues();
  CHECK(nu[0] == doctest::Approx(0.5).epsilon(1e-9));
  // Momentum-difference squeeze is a constant of free motion.
  CHECK(s1.cov(1, 1) + s1.cov(3, 3) - 2 * s1.cov(1, 3) ==
        doctest::Approx(0.01).epsilon(1e-9));
  // Single-axis evolution touches only its own block.
  const CovarianceState sa = evolve_covariance_axis(s0, 1.0, 2);
  CHECK(sa.cov(0, 0) == doctest::Approx(s0.cov(0, 0)).epsilon(1e-14));
  CHECK(sa.cov(2, 2) == doctest::Approx(50.005).epsilon(1e-12));
  CHECK(sa.cov(1, 1) == doctest::Approx(s0.cov(1, 1)).epsilon(1e-14));
}

TEST_CASE("sharp conditioning saturates the uncertainty identity") {
  const ConditionalMoments m = conditional_moments(kEpr, 3.0);
  CHECK(m.mean_x2 == doctest::Approx(-0.99980002 * 3.0).epsilon(1e-8));
  CHECK(m.var_x2 == doctest::Approx(0.0099990001).epsilon(1e-8));
  CHECK(m.var_p2 == doctest::Approx(25.0025).epsilon(1e-10));
  // Pure state: Var(x2|x1) * Var(p2|x1) = hbar^2 / 4 exactly.
  CHECK(m.var_x2 * m.var_p2 == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("slit conditioned state, exact window") {
  const Aperture slit{ApertureKind::Tophat, 2.0, 1.0};
  const SlitConditionedState s = slit_conditioned_state(kEpr, slit, 0.0, 0.0);
  CHECK(s.detection_probability == doctest::Approx(0.0735479585).epsilon(1e-7));
  CHECK(s.mean(0) == doctest::Approx(-1.99294496).epsilon(1e-7));
  CHECK(s.std_x2() == doctest::Approx(0.30522363).epsilon(1e-7));
  CHECK(s.std_p2() == doctest::Approx(5.00024999).epsilon(1e-8));
  CHECK(s.outcome_mean > 1.5);
  CHECK(s.outcome_mean < 2.5);
  // Registered pair stays anticorrelated: small residual.
  CHECK(std::abs(s.residual_mean()) < 0.01);
  CHECK(s.residual_std() < 0.12);
}

TEST_CASE("slit conditioned state, snapped window") {
  const SlitConditionedState s = slit_conditioned_state(kEpr, kSnapped, 0.0, 0.0);
  CHECK(s.detection_probability == doctest::Approx(0.06900579).epsilon(1e-7));
  CHECK(s.mean(0) == doctest::Approx(-1.98596174).epsilon(1e-7));
  CHECK(s.std_x2() == doctest::Approx(0.28828075).epsilon(1e-7));
}

TEST_CASE("delay acts as a shear on the conditioned mixture") {
  const SlitConditionedState s0 = slit_conditioned_state(kEpr, kSnapped, 0.0, 0.0);
  const SlitConditionedState s1 = slit_conditioned_state(kEpr, kSnapped, 0.0, 1.0);
  Eigen::Matrix2d shear;
  shear << 1.0, 1.0, 0.0, 1.0;
  const Eigen::Matrix2d expected = shear * s0.cov * shear.transpose();
  CHECK((s1.cov - expected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(s1.mean(0) == doctest::Approx(s0.mean(0) + s0.mean(1)).epsilon(1e-10));
  CHECK(s1.detection_probability == doctest::Approx(s0.detection_probability));
  // Conditioning on x1 at t=0 leaves p2 at its marginal: mean_p2 = 0, so the
  // conditional mean of x2 does not drift.
  CHECK(s1.mean(0) == doctest::Approx(-1.98596174).epsilon(1e-7));
  CHECK(s1.std_x2() ==
        doctest::Approx(std::sqrt(0.28828075 * 0.28828075 + 25.0025)).epsilon(1e-7));
}

TEST_CASE("gaussian aperture matches its closed form") {
  const Aperture gauss{ApertureKind::Gaussian, 2.0, 0.5};
  const SlitConditionedState s = slit_conditioned_state(kEpr, gauss, 0.0, 0.0);
  const double v1 = 25.0025;
  const double w2 = 0.25;
  const double expected =
      std::sqrt(w2 / (w2 + v1)) * std::exp(-4.0 / (2.0 * (w2 + v1)));
  CHECK(s.detection_probability == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("momentum bound ratio in both regimes") {
  // Narrow-slit regime: conditioned momentum spread far below hbar / a.
  const EprParams kim{0.5, 10.0};
  const Aperture slit{ApertureKind::Tophat, 0.0, 0.2};
  const SlitConditionedState s = slit_conditioned_state(kim, slit, 0.0, 0.0);
  CHECK(s.std_p2() == doctest::Approx(1.00124922).epsilon(1e-8));
  const double bound = 1.0 / slit.effective_width();
  CHECK(s.std_p2() / bound == doctest::Approx(0.20024984).epsilon(1e-7));
  // Canonical pair with a unit slit sits far above the same bound.
  const Aperture unit{ApertureKind::Tophat, 2.0, 1.0};
  const SlitConditionedState c = slit_conditioned_state(kEpr, unit, 0.0, 0.0);
  CHECK(c.std_p2() / (1.0 / unit.effective_width()) ==
        doctest::Approx(5.00024999).epsilon(1e-7));
  // Either way the mixture obeys the uncertainty floor.
  CHECK(s.std_x2() * s.std_p2() >= 0.5 * (1.0 - 1e-12));
  CHECK(c.std_x2() * c.std_p2() >= 0.5 * (1.0 - 1e-12));
}

TEST_CASE("conditioning after evolution tightens momentum") {
  // At t > 0 position readout carries momentum information, so Var(p2 | x1)
  // drops below the marginal.
  const SlitConditionedState late =
      slit_conditioned_state(kEpr, Aperture{ApertureKind::Tophat, 2.0, 1.0}, 1.0, 0.0);
  CHECK(late.std_p2() < 5.00024999);
  CHECK(late.detection_probability > 0.0);
  CHECK(late.detection_probability < 1.0);
}
