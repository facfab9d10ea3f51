#pragma once

#include "radshift/trajectory.hpp"

namespace radshift {

enum class ShiftRoute { direct_integral, green_function, time_dependent };

struct ClassicalShiftResult {
  double delta_z_LD = 0.0;     // shift from the radiation-reaction force
  double delta_z_extra = 0.0;  // measurement-position correction (z0 != 0)
  double E_em = 0.0;           // radiated energy, Larmor route
  ShiftRoute route = ShiftRoute::direct_integral;
  double delta_z_class() const { return delta_z_LD + delta_z_extra; }
};

// Nested-integral route (static potentials):
//   -(v0/m) int [int_0^t dt'/(gamma^3 zdot^2)] F_LD zdot dt,
// outer integral restricted to the acceleration support.
double delta_z_LD_direct(const Trajectory& traj);

// Green's-function route, either potential kind:
//   int F_LD(t) Dz_t(0) dt,
// with Dz_t the linearized response seeded at each quadrature node.
double delta_z_green(const Trajectory& traj);

// Correction when the position is measured at z0 (> -Z2) instead of 0:
//   -z0 E_em / (m gamma0^3 v0^2);  identically 0 for time-dependent
// potentials.
double delta_z_extra(const Trajectory& traj, double z0);

// Closed route for time-dependent potentials:
//   -int [int_0^t dt'/(m gamma^3)] F_LD dt.
double delta_z_class_tdep(const Trajectory& traj);

// Bundles the shift, the measurement correction at z0, and the radiated
// energy; the route defaults to direct_integral (static) or time_dependent.
ClassicalShiftResult compute_classical_shift(const Trajectory& traj,
                                             double z0 = 0.0);
ClassicalShiftResult compute_classical_shift(const Trajectory& traj, double z0,
                                             ShiftRoute route);

}  // namespace radshift
