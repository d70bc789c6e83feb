#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eprlab/fourier.hpp"
#include "eprlab/grid.hpp"
#include "eprlab/moments.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/states.hpp"

using namespace eprlab;

TEST_CASE("grid construction and duality") {
  const Grid1D g = make_grid(1024, -40.0, 40.0);
  CHECK(g.dx == doctest::Approx(80.0 / 1024).epsilon(1e-15));
  CHECK(g.x(0) == -40.0);
  CHECK(g.x_max() == doctest::Approx(40.0));
  // dp * dx * n == 2*pi*hbar exactly underpins transform unitarity.
  CHECK(g.dp() * g.dx * static_cast<double>(g.n) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(g.p(512) == 0.0);
  CHECK(g.p(0) == doctest::Approx(-512.0 * g.dp()));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(1000, -40.0, 40.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, -40.0, 40.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1024, 40.0, -40.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1024, -40.0, 40.0, {-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("round trip and parseval are exact") {
  const Grid1D g = make_grid(512, -20.0, 20.0);
  const CounterRng rng(5, 0);
  Field1D f = make_field(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    const auto z = rng.normal_pair(j);
    // Smooth envelope keeps the state representable on the lattice.
    const double env = std::exp(-0.02 * g.x(j) * g.x(j));
    f.values[j] = Complex{z[0], z[1]} * env;
  }
  f.normalize();
  const Field1D mom = fourier_transform(f, Representation::Momentum);
  CHECK(std::abs(mom.squared_norm() - 1.0) < 1e-12);  // Parseval
  const Field1D back = fourier_transform(mom, Representation::Position);
  double max_dev = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    max_dev = std::max(max_dev, std::abs(back.values[j] - f.values[j]));
  CHECK(max_dev < 1e-12);
}

TEST_CASE("representation mismatch is rejected") {
  const Grid1D g = make_grid(64, -10.0, 10.0);
  const Field1D f = gaussian_packet(g, 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(fourier_transform(f, Representation::Position),
                  std::invalid_argument);
  const Field1D mom = fourier_transform(f, Representation::Momentum);
  CHECK_THROWS_AS(fourier_transform(mom, Representation::Momentum),
                  std::invalid_argument);
}

TEST_CASE("gaussian transforms to the analytic momentum profile") {
  const Grid1D g = make_grid(1024, -40.0, 40.0);
  const double sigma = 1.3;
  const double x0 = 2.0;
  const double p0 = -1.5;
  const Field1D f = gaussian_packet(g, x0, p0, sigma);
  const Field1D mom = fourier_transform(f, Representation::Momentum);
  // |phi(p)|^2 is a Gaussian with std hbar/(2 sigma) centered at p0.
  const double sp = 0.5 / sigma;
  double max_dev = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) {
    const double p = g.p(k);
    const double expected = std::exp(-(p - p0) * (p - p0) / (2.0 * sp * sp)) /
                            (sp * std::sqrt(2.0 * std::numbers::pi));
    max_dev = std::max(max_dev, std::abs(std::norm(mom.values[k]) - expected));
  }
  CHECK(max_dev < 1e-10);
}

TEST_CASE("axis transforms are unitary and compose") {
  const Grid1D g = make_grid(128, -15.0, 15.0);
  const Field2D f = epr_pair(g, g, EprParams{1.0, 3.0});
  const Field2D m2 = fourier_transform_axis(f, 2, Representation::Momentum);
  CHECK(m2.rep1 == Representation::Position);
  CHECK(m2.rep2 == Representation::Momentum);
  CHECK(std::abs(m2.squared_norm() - 1.0) < 1e-12);
  const Field2D both = fourier_transform(f, Representation::Momentum);
  CHECK(std::abs(both.squared_norm() - 1.0) < 1e-12);
  const Field2D back = fourier_transform(both, Representation::Position);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    max_dev = std::max(max_dev, std::abs(back.values[i] - f.values[i]));
  CHECK(max_dev < 1e-12);
}

TEST_CASE("moment extraction is exact for gaussian packets") {
  const Grid1D g = make_grid(1024, -40.0, 40.0);
  const DispersionReport r = moments(gaussian_packet(g, 1.25, 0.75, 2.0));
  CHECK(std::abs(r.mean_x - 1.25) < 1e-10);
  CHECK(std::abs(r.std_x - 2.0) < 1e-10);
  CHECK(std::abs(r.mean_p - 0.75) < 1e-10);
  CHECK(std::abs(r.std_p - 0.25) < 1e-10);
  CHECK(r.product >= 0.5 * (1.0 - 1e-9));
}

TEST_CASE("moments require normalization") {
  const Grid1D g = make_grid(256, -20.0, 20.0);
  Field1D f = gaussian_packet(g, 0.0, 0.0, 1.0);
  for (auto& v : f.values) v *= 1.1;
  CHECK_THROWS_AS(moments(f), std::invalid_argument);
}

TEST_CASE("marginals integrate to one") {
  const Grid1D g = make_grid(256, -25.0, 25.0);
  const Field2D f = epr_pair(g, g, EprParams{0.5, 4.0});
  for (int axis : {1, 2}) {
    const auto rho = marginal(f, axis);
    double total = 0.0;
    for (double v : rho) total += v;
    CHECK(std::abs(total * g.dx - 1.0) < 1e-12);
  }
}
