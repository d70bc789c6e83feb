#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "eprlab/bell.hpp"
#include "eprlab/dynamics.hpp"
#include "eprlab/fourier.hpp"
#include "eprlab/measurement.hpp"
#include "eprlab/moments.hpp"
#include "eprlab/oracle.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/states.hpp"
#include "eprlab/version.hpp"

namespace py = pybind11;
using namespace eprlab;

namespace {

std::vector<std::vector<double>> matrix_rows(const Eigen::Matrix4d& m) {
  std::vector<std::vector<double>> rows(4, std::vector<double>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) rows[a][b] = m(a, b);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entangled-pair numerical laboratory (C++ core)";
  m.attr("__version__") = kVersion;

  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init<>())
      .def(py::init([](double hbar, double mass) {
             PhysicalConstants c{hbar, mass};
             validate(c);
             return c;
           }),
           py::arg("hbar"), py::arg("mass"))
      .def_readonly("hbar", &PhysicalConstants::hbar)
      .def_readonly("mass", &PhysicalConstants::mass);

  py::class_<Grid1D>(m, "Grid1D")
      .def_readonly("n", &Grid1D::n)
      .def_readonly("x_min", &Grid1D::x_min)
      .def_readonly("dx", &Grid1D::dx)
      .def_readonly("hbar", &Grid1D::hbar)
      .def("x", &Grid1D::x, py::arg("j"))
      .def("p", &Grid1D::p, py::arg("k"))
      .def("dp", &Grid1D::dp)
      .def("x_max", &Grid1D::x_max)
      .def("p_max", &Grid1D::p_max);

  m.def("make_grid", &make_grid, py::arg("n"), py::arg("x_min"), py::arg("x_max"),
        py::arg("constants") = PhysicalConstants{});

  py::enum_<Representation>(m, "Representation")
      .value("POSITION", Representation::Position)
      .value("MOMENTUM", Representation::Momentum);

  py::class_<Field1D>(m, "Field1D")
      .def_readonly("grid", &Field1D::grid)
      .def_readonly("rep", &Field1D::rep)
      .def_readonly("values", &Field1D::values)
      .def("cell", &Field1D::cell)
      .def("coord", &Field1D::coord, py::arg("j"))
      .def("squared_norm", &Field1D::squared_norm)
      .def("density", &Field1D::density);

  py::class_<Field2D>(m, "Field2D")
      .def_readonly("grid1", &Field2D::grid1)
      .def_readonly("grid2", &Field2D::grid2)
      .def_readonly("rep1", &Field2D::rep1)
      .def_readonly("rep2", &Field2D::rep2)
      .def("squared_norm", &Field2D::squared_norm);

  m.def("gaussian_packet", &gaussian_packet, py::arg("grid"), py::arg("x0"),
        py::arg("p0"), py::arg("sigma"));

  py::class_<EprParams>(m, "EprParams")
      .def(py::init([](double sp, double sm) { return EprParams{sp, sm}; }),
           py::arg("sigma_plus"), py::arg("sigma_minus"))
      .def_readonly("sigma_plus", &EprParams::sigma_plus)
      .def_readonly("sigma_minus", &EprParams::sigma_minus)
      .def("correlation_quality", &EprParams::correlation_quality);

  m.def("epr_pair", &epr_pair, py::arg("grid1"), py::arg("grid2"), py::arg("params"));

  py::class_<DiscreteSpec>(m, "DiscreteSpec")
      .def(py::init([](std::size_t terms, double spacing, double peak_sigma) {
             return DiscreteSpec{terms, spacing, peak_sigma};
           }),
           py::arg("terms"), py::arg("spacing"), py::arg("peak_sigma"))
      .def_readonly("terms", &DiscreteSpec::terms)
      .def_readonly("spacing", &DiscreteSpec::spacing)
      .def_readonly("peak_sigma", &DiscreteSpec::peak_sigma)
      .def("centers", &DiscreteSpec::centers);

  m.def("discrete_entangled", &discrete_entangled, py::arg("grid1"), py::arg("grid2"),
        py::arg("spec"));
  m.def("peak_masses", &peak_masses, py::arg("field"), py::arg("spec"));

  m.def("fourier_transform",
        py::overload_cast<const Field1D&, Representation>(&fourier_transform),
        py::arg("field"), py::arg("target"));
  m.def("fourier_transform_axis", &fourier_transform_axis, py::arg("field"),
        py::arg("axis"), py::arg("target"));

  m.def("free_evolve",
        py::overload_cast<const Field1D&, double, const PhysicalConstants&>(
            &free_evolve),
        py::arg("field"), py::arg("t"), py::arg("constants") = PhysicalConstants{});
  m.def("free_evolve_2d",
        py::overload_cast<const Field2D&, double, const PhysicalConstants&>(
            &free_evolve),
        py::arg("field"), py::arg("t"), py::arg("constants") = PhysicalConstants{});
  m.def("free_evolve_axis", &free_evolve_axis, py::arg("field"), py::arg("t"),
        py::arg("axis"), py::arg("constants") = PhysicalConstants{});
  m.def("spread_law", &spread_law, py::arg("sigma0"), py::arg("t"),
        py::arg("constants") = PhysicalConstants{});

  py::class_<DispersionReport>(m, "DispersionReport")
      .def_readonly("mean_x", &DispersionReport::mean_x)
      .def_readonly("std_x", &DispersionReport::std_x)
      .def_readonly("mean_p", &DispersionReport::mean_p)
      .def_readonly("std_p", &DispersionReport::std_p)
      .def_readonly("product", &DispersionReport::product);

  m.def("moments", &moments, py::arg("field"));
  m.def("marginal", &marginal, py::arg("field"), py::arg("axis"));
  m.def(
      "mean_vector",
      [](const Field2D& f) {
        const Eigen::Vector4d v = mean_vector(f);
        return std::vector<double>{v(0), v(1), v(2), v(3)};
      },
      py::arg("field"));
  m.def(
      "covariance_matrix",
      [](const Field2D& f) { return matrix_rows(covariance_matrix(f)); },
      py::arg("field"));

  py::enum_<ApertureKind>(m, "ApertureKind")
      .value("TOPHAT", ApertureKind::Tophat)
      .value("GAUSSIAN", ApertureKind::Gaussian);

  py::class_<Aperture>(m, "Aperture")
      .def(py::init([](ApertureKind kind, double center, double width) {
             return Aperture{kind, center, width};
           }),
           py::arg("kind") = ApertureKind::Tophat, py::arg("center") = 0.0,
           py::arg("width") = 1.0)
      .def_readonly("kind", &Aperture::kind)
      .def_readonly("center", &Aperture::center)
      .def_readonly("width", &Aperture::width)
      .def("transmission", &Aperture::transmission, py::arg("x"))
      .def("effective_width", &Aperture::effective_width)
      .def("snapped", &Aperture::snapped, py::arg("grid"));

  py::class_<ConditionalEnsemble>(m, "ConditionalEnsemble")
      .def_readonly("weights", &ConditionalEnsemble::weights)
      .def_readonly("outcomes", &ConditionalEnsemble::outcomes)
      .def_readonly("detection_probability",
                    &ConditionalEnsemble::detection_probability)
      .def("position_density", &ConditionalEnsemble::position_density)
      .def("momentum_density", &ConditionalEnsemble::momentum_density)
      .def("mixture_moments", &ConditionalEnsemble::mixture_moments)
      .def("evolved", &ConditionalEnsemble::evolved, py::arg("t"),
           py::arg("constants") = PhysicalConstants{});

  m.def("condition_on_slit", &condition_on_slit, py::arg("field"), py::arg("aperture"));
  m.def("collapse_packet_m1", &collapse_packet_m1, py::arg("grid"), py::arg("x1"),
        py::arg("aperture"), py::arg("constants") = PhysicalConstants{});
  m.def("no_signaling_check", &no_signaling_check, py::arg("field"),
        py::arg("aperture"));

  py::class_<ConditionalMoments>(m, "ConditionalMoments")
      .def_readonly("mean_x2", &ConditionalMoments::mean_x2)
      .def_readonly("var_x2", &ConditionalMoments::var_x2)
      .def_readonly("var_p2", &ConditionalMoments::var_p2);

  m.def("conditional_moments", &conditional_moments, py::arg("params"), py::arg("x1"),
        py::arg("constants") = PhysicalConstants{});

  py::class_<SlitConditionedState>(m, "SlitConditionedState")
      .def_readonly("detection_probability",
                    &SlitConditionedState::detection_probability)
      .def_readonly("outcome_mean", &SlitConditionedState::outcome_mean)
      .def_readonly("outcome_var", &SlitConditionedState::outcome_var)
      .def("mean_x2", [](const SlitConditionedState& s) { return s.mean(0); })
      .def("std_x2", &SlitConditionedState::std_x2)
      .def("std_p2", &SlitConditionedState::std_p2)
      .def("residual_mean", &SlitConditionedState::residual_mean)
      .def("residual_std", &SlitConditionedState::residual_std);

  m.def("slit_conditioned_state", &slit_conditioned_state, py::arg("params"),
        py::arg("aperture"), py::arg("measurement_time") = 0.0,
        py::arg("delay") = 0.0, py::arg("constants") = PhysicalConstants{});

  m.def("singlet_correlation", &singlet_correlation, py::arg("angle_a"),
        py::arg("angle_b"));
  m.def("chsh_value", &chsh_value, py::arg("e11"), py::arg("e12"), py::arg("e21"),
        py::arg("e22"));
  m.def("singlet_chsh_standard", &singlet_chsh_standard);
  m.def("lhv_chsh_values", [] {
    const LhvEnumeration e = enumerate_lhv();
    return std::vector<double>(e.values.begin(), e.values.end());
  });
  m.def("lhv_max_chsh", [] { return enumerate_lhv().max_abs; });

  py::class_<CounterRng>(m, "CounterRng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0)
      .def("uniform", &CounterRng::uniform, py::arg("counter"))
      .def("normal_pair", &CounterRng::normal_pair, py::arg("counter"));
}
