#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "radshift/classical_shift.hpp"
#include "radshift/emission.hpp"
#include "radshift/errors.hpp"
#include "radshift/jacobi.hpp"
#include "radshift/params.hpp"
#include "radshift/potentials.hpp"
#include "radshift/quantum_shift.hpp"
#include "radshift/trajectory.hpp"
#include "radshift/wkb.hpp"

namespace py = pybind11;
using namespace radshift;

PYBIND11_MODULE(_radshift, m) {
  m.doc() = "Radiation-reaction position-shift laboratory (C++ core)";

  // Exception hierarchy: base first so derived translators take precedence.
  auto exc_base = py::register_exception<Error>(m, "RadshiftError");
  py::register_exception<DomainError>(m, "DomainError", exc_base.ptr());
  py::register_exception<TurningPointError>(m, "TurningPointError",
                                            exc_base.ptr());
  py::register_exception<CutoffCoverageError>(m, "CutoffCoverageError",
                                              exc_base.ptr());
  py::register_exception<KinematicsError>(m, "KinematicsError",
                                          exc_base.ptr());
  py::register_exception<TailError>(m, "TailError", exc_base.ptr());
  py::register_exception<DerivativeStepError>(m, "DerivativeStepError",
                                              exc_base.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError",
                                          exc_base.ptr());
  py::register_exception<ToleranceError>(m, "ToleranceError", exc_base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", exc_base.ptr());

  // -- parameters and potentials ---------------------------------------------

  py::class_<ParticleParams>(m, "ParticleParams")
      .def(py::init([](double m_, double alpha_c) {
             ParticleParams p{m_, alpha_c};
             validate(p);
             return p;
           }),
           py::arg("m") = 1.0, py::arg("alpha_c") = 1.0e-3)
      .def_readwrite("m", &ParticleParams::m)
      .def_readwrite("alpha_c", &ParticleParams::alpha_c);

  py::class_<PotentialValue>(m, "PotentialValue")
      .def_readonly("V", &PotentialValue::V)
      .def_readonly("d1", &PotentialValue::d1)
      .def_readonly("d2", &PotentialValue::d2);

  py::class_<StaticPotentialSpec>(m, "StaticPotentialSpec")
      .def(py::init([](double V0, double Z1, double Z2, int smoothness_order) {
             StaticPotentialSpec s{V0, Z1, Z2, smoothness_order};
             validate(s);
             return s;
           }),
           py::arg("V0") = 0.3, py::arg("Z1") = 2.0, py::arg("Z2") = 1.0,
           py::arg("smoothness_order") = 3)
      .def_readwrite("V0", &StaticPotentialSpec::V0)
      .def_readwrite("Z1", &StaticPotentialSpec::Z1)
      .def_readwrite("Z2", &StaticPotentialSpec::Z2)
      .def_readwrite("smoothness_order", &StaticPotentialSpec::smoothness_order);

  py::class_<TimePotentialSpec>(m, "TimePotentialSpec")
      .def(py::init([](double V0, double t_a, double t_b, int smoothness_order) {
             TimePotentialSpec s{V0, t_a, t_b, smoothness_order};
             validate(s);
             return s;
           }),
           py::arg("V0") = 0.3, py::arg("t_a") = -3.0, py::arg("t_b") = -1.0,
           py::arg("smoothness_order") = 3)
      .def_readwrite("V0", &TimePotentialSpec::V0)
      .def_readwrite("t_a", &TimePotentialSpec::t_a)
      .def_readwrite("t_b", &TimePotentialSpec::t_b)
      .def_readwrite("smoothness_order", &TimePotentialSpec::smoothness_order);

  m.def("eval_static", &eval_static, py::arg("spec"), py::arg("z"));
  m.def("eval_time", &eval_time, py::arg("spec"), py::arg("t"));

  // -- trajectories -----------------------------------------------------------

  py::enum_<PotentialKind>(m, "PotentialKind")
      .value("static_z", PotentialKind::static_z)
      .value("time_t", PotentialKind::time_t);

  py::class_<GridControl>(m, "GridControl")
      .def(py::init<>())
      .def_readwrite("nodes_per_unit", &GridControl::nodes_per_unit)
      .def_readwrite("density", &GridControl::density)
      .def_readwrite("padding", &GridControl::padding)
      .def_readwrite("rel_tol", &GridControl::rel_tol)
      .def_readwrite("abs_tol", &GridControl::abs_tol)
      .def_readwrite("conservation_bound", &GridControl::conservation_bound);

  py::class_<TrajectorySample>(m, "TrajectorySample")
      .def_readonly("t", &TrajectorySample::t)
      .def_readonly("z", &TrajectorySample::z)
      .def_readonly("zdot", &TrajectorySample::zdot)
      .def_readonly("zddot", &TrajectorySample::zddot)
      .def_readonly("zdddot", &TrajectorySample::zdddot)
      .def_readonly("gamma", &TrajectorySample::gamma);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("kind", &Trajectory::kind)
      .def_property_readonly("particle", &Trajectory::particle)
      .def_property_readonly("p_final", &Trajectory::p_final)
      .def_property_readonly("p0", &Trajectory::p0)
      .def_property_readonly("v0", &Trajectory::v0)
      .def_property_readonly("v_in", &Trajectory::v_in)
      .def_property_readonly("conserved", &Trajectory::conserved)
      .def_property_readonly("t_min", &Trajectory::t_min)
      .def_property_readonly("t_acc_begin", &Trajectory::t_acc_begin)
      .def_property_readonly("t_acc_end", &Trajectory::t_acc_end)
      .def_property_readonly("conservation_residual",
                             &Trajectory::conservation_residual)
      .def("eval", &Trajectory::eval, py::arg("t"))
      .def("samples", &Trajectory::samples,
           py::return_value_policy::reference_internal);

  m.def("integrate_trajectory",
        py::overload_cast<const ParticleParams&, const StaticPotentialSpec&,
                          double, const GridControl&>(&integrate_trajectory),
        py::arg("params"), py::arg("spec"), py::arg("p_final"),
        py::arg("grid") = GridControl{});
  m.def("integrate_trajectory",
        py::overload_cast<const ParticleParams&, const TimePotentialSpec&,
                          double, const GridControl&>(&integrate_trajectory),
        py::arg("params"), py::arg("spec"), py::arg("p_final"),
        py::arg("grid") = GridControl{});

  m.def("lorentz_dirac_force", &lorentz_dirac_force, py::arg("traj"),
        py::arg("t"));
  m.def("emitted_energy_larmor", &emitted_energy_larmor, py::arg("traj"));

  py::class_<JacobiField>(m, "JacobiField")
      .def_property_readonly("seed_time", &JacobiField::seed_time)
      .def("Dz", &JacobiField::Dz, py::arg("t"))
      .def("DP", &JacobiField::DP, py::arg("t"));
  m.def("jacobi_field", &jacobi_field, py::arg("traj"), py::arg("s"));
  m.def("symplectic_product", &symplectic_product, py::arg("f1"),
        py::arg("f2"), py::arg("t"));
  m.def("dz_dp_closed_form", &dz_dp_closed_form, py::arg("traj"),
        py::arg("t"));

  // -- classical shift ---------------------------------------------------------

  py::enum_<ShiftRoute>(m, "ShiftRoute")
      .value("direct_integral", ShiftRoute::direct_integral)
      .value("green_function", ShiftRoute::green_function)
      .value("time_dependent", ShiftRoute::time_dependent);

  py::class_<ClassicalShiftResult>(m, "ClassicalShiftResult")
      .def_readonly("delta_z_LD", &ClassicalShiftResult::delta_z_LD)
      .def_readonly("delta_z_extra", &ClassicalShiftResult::delta_z_extra)
      .def_readonly("E_em", &ClassicalShiftResult::E_em)
      .def_readonly("route", &ClassicalShiftResult::route)
      .def_property_readonly("delta_z_class",
                             &ClassicalShiftResult::delta_z_class);

  m.def("delta_z_LD_direct", &delta_z_LD_direct, py::arg("traj"));
  m.def("delta_z_green", &delta_z_green, py::arg("traj"));
  m.def("delta_z_extra", &delta_z_extra, py::arg("traj"), py::arg("z0"));
  m.def("delta_z_class_tdep", &delta_z_class_tdep, py::arg("traj"));
  m.def("compute_classical_shift",
        py::overload_cast<const Trajectory&, double>(&compute_classical_shift),
        py::arg("traj"), py::arg("z0") = 0.0);
  m.def("compute_classical_shift",
        py::overload_cast<const Trajectory&, double, ShiftRoute>(
            &compute_classical_shift),
        py::arg("traj"), py::arg("z0"), py::arg("route"));

  // -- emission ----------------------------------------------------------------

  py::class_<CutoffFunction>(m, "CutoffFunction")
      .def(py::init<double, double, double, int>(), py::arg("xi_a"),
           py::arg("xi_b"), py::arg("width"), py::arg("smoothness_order") = 3)
      .def("chi", &CutoffFunction::chi, py::arg("xi"))
      .def("chi_prime", &CutoffFunction::chi_prime, py::arg("xi"))
      .def_property_readonly("xi_a", &CutoffFunction::xi_a)
      .def_property_readonly("xi_b", &CutoffFunction::xi_b)
      .def_property_readonly("width", &CutoffFunction::width)
      .def_property_readonly("c_profile", &CutoffFunction::c_profile);
  m.def("make_cutoff", &make_cutoff, py::arg("traj"), py::arg("width"),
        py::arg("smoothness_order") = 3);

  py::enum_<AmplitudeForm>(m, "AmplitudeForm")
      .value("velocity", AmplitudeForm::velocity)
      .value("ibp", AmplitudeForm::ibp);

  py::class_<AmplitudePair>(m, "AmplitudePair")
      .def_readonly("A_t", &AmplitudePair::A_t)
      .def_readonly("A_z", &AmplitudePair::A_z);

  py::class_<AmplitudeControl>(m, "AmplitudeControl")
      .def(py::init<>())
      .def_readwrite("filon_threshold", &AmplitudeControl::filon_threshold)
      .def_readwrite("support_nodes", &AmplitudeControl::support_nodes)
      .def_readwrite("ramp_nodes", &AmplitudeControl::ramp_nodes)
      .def_readwrite("rel_tol", &AmplitudeControl::rel_tol);

  m.def("emission_amplitude", &emission_amplitude, py::arg("traj"),
        py::arg("k"), py::arg("theta"), py::arg("chi"),
        py::arg("form") = AmplitudeForm::ibp,
        py::arg("ctl") = AmplitudeControl{});

  py::class_<SpectralControl>(m, "SpectralControl")
      .def(py::init<>())
      .def_readwrite("n_theta", &SpectralControl::n_theta)
      .def_readwrite("nodes_per_panel", &SpectralControl::nodes_per_panel)
      .def_readwrite("k_panel_width", &SpectralControl::k_panel_width)
      .def_readwrite("tail_rel_tol", &SpectralControl::tail_rel_tol)
      .def_readwrite("max_panels", &SpectralControl::max_panels)
      .def_readwrite("min_slope", &SpectralControl::min_slope)
      .def_readwrite("amplitude", &SpectralControl::amplitude)
      .def_readwrite("workers", &SpectralControl::workers);

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_readonly("E_em", &SpectralResult::E_em)
      .def_readonly("E_raw", &SpectralResult::E_raw)
      .def_readonly("artifact", &SpectralResult::artifact)
      .def_readonly("tail_estimate", &SpectralResult::tail_estimate)
      .def_readonly("k_used", &SpectralResult::k_used)
      .def_readonly("slope", &SpectralResult::slope);

  py::class_<ExtrapolatedSpectral>(m, "ExtrapolatedSpectral")
      .def_readonly("at_w", &ExtrapolatedSpectral::at_w)
      .def_readonly("at_2w", &ExtrapolatedSpectral::at_2w)
      .def_readonly("E_extr", &ExtrapolatedSpectral::E_extr)
      .def_readonly("disagreement", &ExtrapolatedSpectral::disagreement);

  m.def(
      "energy_spectral",
      [](const Trajectory& traj, const CutoffFunction& chi, double k_max,
         const SpectralControl& ctl) {
        return energy_spectral(traj, chi, k_max, ctl);
      },
      py::arg("traj"), py::arg("chi"), py::arg("k_max") = 0.0,
      py::arg("ctl") = SpectralControl{},
      py::call_guard<py::gil_scoped_release>());
  m.def("energy_time_domain", &energy_time_domain, py::arg("traj"));
  m.def("extrapolate_spectral_energy", &extrapolate_spectral_energy,
        py::arg("traj"), py::arg("width"), py::arg("k_max") = 0.0,
        py::arg("ctl") = SpectralControl{}, py::arg("smoothness_order") = 3,
        py::call_guard<py::gil_scoped_release>());
  m.def("solid_angle_dtau_sq", &solid_angle_dtau_sq, py::arg("zdot"));

  // -- wkb ---------------------------------------------------------------------

  m.def("kappa", &kappa, py::arg("spec"), py::arg("params"), py::arg("p"),
        py::arg("z"));
  m.def("wkb_validity", &wkb_validity, py::arg("spec"), py::arg("params"),
        py::arg("p"));
  m.def("phase_integral", &phase_integral, py::arg("spec"), py::arg("params"),
        py::arg("p"), py::arg("z"));

  py::class_<WkbAmplitudeControl>(m, "WkbAmplitudeControl")
      .def(py::init<>())
      .def_readwrite("phase_nodes", &WkbAmplitudeControl::phase_nodes)
      .def_readwrite("rel_tol", &WkbAmplitudeControl::rel_tol);

  m.def("amplitude_direct", &amplitude_direct, py::arg("traj"), py::arg("k"),
        py::arg("theta"), py::arg("hbar"), py::arg("chi"),
        py::arg("ctl") = WkbAmplitudeControl{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<HbarConvergence>(m, "HbarConvergence")
      .def_readonly("hbars", &HbarConvergence::hbars)
      .def_readonly("amplitudes", &HbarConvergence::amplitudes)
      .def_readonly("richardson", &HbarConvergence::richardson)
      .def_readonly("order_t", &HbarConvergence::order_t)
      .def_readonly("order_z", &HbarConvergence::order_z);

  m.def("hbar_convergence", &hbar_convergence, py::arg("traj"), py::arg("k"),
        py::arg("theta"), py::arg("chi"),
        py::arg("hbars") = std::vector<double>{1e-2, 1e-3, 1e-4},
        py::arg("ctl") = WkbAmplitudeControl{},
        py::call_guard<py::gil_scoped_release>());

  // -- quantum shift -----------------------------------------------------------

  py::enum_<Q1Route>(m, "Q1Route")
      .value("xi_integral", Q1Route::xi_integral)
      .value("t_integral", Q1Route::t_integral)
      .value("closed_form", Q1Route::closed_form);

  py::class_<Q1XiControl>(m, "Q1XiControl")
      .def(py::init<>())
      .def_readwrite("n_theta", &Q1XiControl::n_theta)
      .def_readwrite("delta_p_rel", &Q1XiControl::delta_p_rel)
      .def_readwrite("rel_tol", &Q1XiControl::rel_tol)
      .def_readwrite("richardson_tol", &Q1XiControl::richardson_tol)
      .def_readwrite("workers", &Q1XiControl::workers);

  py::class_<Q1XiResult>(m, "Q1XiResult")
      .def_readonly("value", &Q1XiResult::value)
      .def_readonly("cross_term", &Q1XiResult::cross_term)
      .def_readonly("fd_truncation", &Q1XiResult::fd_truncation);

  m.def("delta_z_q1_xi", &delta_z_q1_xi, py::arg("traj"), py::arg("chi"),
        py::arg("ctl") = Q1XiControl{},
        py::call_guard<py::gil_scoped_release>());
  m.def("angular_kernel_sin2", &angular_kernel_sin2, py::arg("zdot"));
  m.def("angular_kernel_sin2_cos", &angular_kernel_sin2_cos, py::arg("zdot"));
  m.def("delta_z_q1_t", &delta_z_q1_t, py::arg("traj"),
        py::arg("closed_kernels") = false);
  m.def("delta_z_q1_closed", &delta_z_q1_closed, py::arg("traj"));
  m.def("delta_z_q2", &delta_z_q2, py::arg("traj"), py::arg("z0"),
        py::arg("E_em"));
  m.def("dp_dP", &dp_dP, py::arg("params"), py::arg("p"), py::arg("hbar_k"));

  py::class_<QuantumShiftResult>(m, "QuantumShiftResult")
      .def_readonly("delta_z_q1", &QuantumShiftResult::delta_z_q1)
      .def_readonly("delta_z_q2", &QuantumShiftResult::delta_z_q2)
      .def_readonly("route_q1", &QuantumShiftResult::route_q1)
      .def_readonly("cross_term", &QuantumShiftResult::cross_term)
      .def_readonly("fd_truncation", &QuantumShiftResult::fd_truncation)
      .def_property_readonly("delta_z_q", &QuantumShiftResult::delta_z_q);

  m.def("compute_quantum_shift", &compute_quantum_shift, py::arg("traj"),
        py::arg("z0") = 0.0, py::arg("route") = Q1Route::closed_form,
        py::arg("ctl") = Q1XiControl{},
        py::call_guard<py::gil_scoped_release>());
}
