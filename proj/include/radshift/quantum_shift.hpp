#pragma once

#include "radshift/emission.hpp"
#include "radshift/params.hpp"
#include "radshift/trajectory.hpp"

namespace radshift {

// hbar -> 0 limit of the one-photon recoil correction to the measured
// position, split as delta_z_q = delta_z_q1 + delta_z_q2.  Three independent
// routes to delta_z_q1 are provided; their mutual agreement (and agreement
// with the classical radiation-reaction shift) is the central consistency
// statement of the package.

enum class Q1Route { xi_integral, t_integral, closed_form };

// ---------------------------------------------------------------------------
// Route 1: retarded-coordinate integral with the p-derivative at fixed xi,
// taken by central differences of re-parameterized neighbor trajectories.

struct Q1XiControl {
  int n_theta = 64;             // Gauss-Legendre nodes in cos(theta)
  double delta_p_rel = 1e-4;    // relative finite-difference step in p
  double rel_tol = 1e-8;        // xi-quadrature tolerance (the finite
                                // difference leaves a noise floor below this)
  double richardson_tol = 1e-5; // cap on the relative step-truncation estimate
  int workers = 1;
};

struct Q1XiResult {
  double value = 0.0;          // the shift itself
  double cross_term = 0.0;     // window-derivative term after the solid angle
  double fd_truncation = 0.0;  // relative Richardson estimate of the fd error
};

// -(alpha_c/4pi) Int dOmega Int dxi (d^2x^mu/dxi^2) d/dp (dx_mu/dxi)|_xi.
// The window chi enters only through its derivative term, which is evaluated
// and reported in cross_term; it collapses after the angular integral because
// Int dOmega (dtau/dxi)^2 = 4pi for every constant velocity.
Q1XiResult delta_z_q1_xi(const Trajectory& traj, const CutoffFunction& chi,
                         const Q1XiControl& ctl = {});

// ---------------------------------------------------------------------------
// Route 2: solid angle reduced to two beaming kernels, integrated in t.

// Int dOmega sin^2(theta) / (1 - zdot cos)^4 and
// Int dOmega sin^2(theta) cos / (1 - zdot cos)^5, by adaptive quadrature.
// Closed forms (8pi/3) gamma^4 and (8pi/3) gamma^6 zdot are used by
// delta_z_q1_t when closed_kernels is set.
double angular_kernel_sin2(double zdot);
double angular_kernel_sin2_cos(double zdot);

double delta_z_q1_t(const Trajectory& traj, bool closed_kernels = false);

// ---------------------------------------------------------------------------
// Route 3: -Int F_LD(t) (dz/dp)_t dt with the closed-form response.

double delta_z_q1_closed(const Trajectory& traj);

// ---------------------------------------------------------------------------
// Recoil of the measured position when the packet is centered at z0 != 0:
// -(m^2 z0 / (p^2 p0)) E_em for the static profile, exactly 0 for the
// time-dependent one (there dp/dP = 1).
double delta_z_q2(const Trajectory& traj, double z0, double E_em);

// Linearized Jacobian between the emitted and detected momentum labels,
// dp/dP = 1 - (m^2/(p^2 p0)) hbar_k.
double dp_dP(const ParticleParams& params, double p, double hbar_k);

// ---------------------------------------------------------------------------
// Bundle

struct QuantumShiftResult {
  double delta_z_q1 = 0.0;
  double delta_z_q2 = 0.0;
  Q1Route route_q1 = Q1Route::closed_form;
  double cross_term = 0.0;     // xi route only
  double fd_truncation = 0.0;  // xi route only
  double delta_z_q() const { return delta_z_q1 + delta_z_q2; }
};

// E_em is taken from the Larmor route internally; pass z0 = 0 to drop the
// packet-offset correction.  The xi route builds its default window with
// width 4 over the acceleration support.
QuantumShiftResult compute_quantum_shift(const Trajectory& traj, double z0 = 0.0,
                                         Q1Route route = Q1Route::closed_form,
                                         const Q1XiControl& ctl = {});

}  // namespace radshift
