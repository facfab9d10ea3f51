#include "radshift/classical_shift.hpp"

#include <cmath>

#include "radshift/jacobi.hpp"
#include "radshift/ode.hpp"
#include "radshift/quadrature.hpp"

namespace radshift {

namespace {

QuadratureControl shift_quadrature() {
  QuadratureControl qc;
  qc.rel_tol = 1.0e-12;
  qc.initial_intervals = 8;
  return qc;
}

// Dz of the response seeded at (0,1) at time s, read at t=0; forward leg only.
double response_at_zero(const Trajectory& traj, double s) {
  if (s == 0.0) return 0.0;
  auto rhs = [&traj](double t, const std::array<double, 2>& y) {
    LinearizedCoefficients c = linearized_coefficients(traj, t);
    return std::array<double, 2>{c.A * y[1], c.B * y[0]};
  };
  OdeControl ctl;
  ctl.rel_tol = 1.0e-12;
  ctl.abs_tol = 1.0e-14;
  auto sol = integrate_ode<2>(rhs, {0.0, 1.0}, s, 0.0, ctl);
  return sol.eval(0.0)[0];
}

}  // namespace

double delta_z_LD_direct(const Trajectory& traj) {
  if (traj.kind() != PotentialKind::static_z)
    throw DomainError("the nested-integral route requires a static potential");
  if (!(traj.t_acc_end() > traj.t_acc_begin())) return 0.0;
  auto f = [&traj](double t) {
    return traj.inner_antiderivative(t) * lorentz_dirac_force(traj, t) *
           traj.eval(t).zdot;
  };
  auto r = integrate_adaptive(f, traj.t_acc_begin(), traj.t_acc_end(),
                              shift_quadrature());
  return -(traj.v0() / traj.particle().m) * r.value;
}

double delta_z_green(const Trajectory& traj) {
  if (!(traj.t_acc_end() > traj.t_acc_begin())) return 0.0;
  auto f = [&traj](double t) {
    return lorentz_dirac_force(traj, t) * response_at_zero(traj, t);
  };
  QuadratureControl qc;
  qc.rel_tol = 1.0e-10;
  qc.initial_intervals = 8;
  auto r = integrate_adaptive(f, traj.t_acc_begin(), traj.t_acc_end(), qc);
  return r.value;
}

double delta_z_extra(const Trajectory& traj, double z0) {
  if (traj.kind() == PotentialKind::time_t) return 0.0;
  if (!(z0 > -traj.static_spec().Z2))
    throw DomainError("measurement position z0 must lie above -Z2");
  if (z0 == 0.0) return 0.0;
  const double m = traj.particle().m;
  const double v0 = traj.v0();
  const double g0 = 1.0 / std::sqrt(1.0 - v0 * v0);
  return -z0 * emitted_energy_larmor(traj) / (m * g0 * g0 * g0 * v0 * v0);
}

double delta_z_class_tdep(const Trajectory& traj) {
  if (traj.kind() != PotentialKind::time_t)
    throw DomainError("the closed route requires a time-dependent potential");
  if (!(traj.t_acc_end() > traj.t_acc_begin())) return 0.0;
  auto f = [&traj](double t) {
    return traj.inner_antiderivative(t) * lorentz_dirac_force(traj, t);
  };
  auto r = integrate_adaptive(f, traj.t_acc_begin(), traj.t_acc_end(),
                              shift_quadrature());
  return -r.value;
}

ClassicalShiftResult compute_classical_shift(const Trajectory& traj,
                                             double z0) {
  return compute_classical_shift(traj, z0,
                                 traj.kind() == PotentialKind::static_z
                                     ? ShiftRoute::direct_integral
                                     : ShiftRoute::time_dependent);
}

ClassicalShiftResult compute_classical_shift(const Trajectory& traj, double z0,
                                             ShiftRoute route) {
  ClassicalShiftResult out;
  out.route = route;
  switch (route) {
    case ShiftRoute::direct_integral:
      out.delta_z_LD = delta_z_LD_direct(traj);
      break;
    case ShiftRoute::green_function:
      out.delta_z_LD = delta_z_green(traj);
      break;
    case ShiftRoute::time_dependent:
      out.delta_z_LD = delta_z_class_tdep(traj);
      break;
  }
  out.E_em = emitted_energy_larmor(traj);
  out.delta_z_extra = delta_z_extra(traj, z0);
  return out;
}

}  // namespace radshift
