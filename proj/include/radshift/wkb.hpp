#pragma once

#include <complex>
#include <vector>

#include "radshift/emission.hpp"
#include "radshift/errors.hpp"
#include "radshift/params.hpp"
#include "radshift/potentials.hpp"
#include "radshift/trajectory.hpp"

namespace radshift {

// Semiclassical scattering modes over the same potential profiles the
// trajectory solver uses, plus the finite-hbar one-photon amplitudes built
// from products of two such modes.  Everything is phrased through the stable
// *difference* kinematics (kappa_p - kappa_P collapses to an hbar-free
// expression), so the hbar -> 0 limit can be probed down to 1e-4 without
// catastrophic cancellation.

// ---------------------------------------------------------------------------
// Local momenta

// Local WKB momentum kappa_p(z) = sqrt((p0 - V(z))^2 - m^2) of a mode labeled
// by its asymptotic momentum p on the V = 0 side (p0 = sqrt(p^2 + m^2)).
// Throws TurningPointError when the radicand is not positive.
double kappa(const StaticPotentialSpec& spec, const ParticleParams& params,
             double p, double z);

// max_z |d(1/kappa_p)/dz|, the standard validity measure of the semiclassical
// approximation for this profile and mode.  Dense grid scan of the analytic
// derivative followed by local golden-section refinement of the peak.
double wkb_validity(const StaticPotentialSpec& spec,
                    const ParticleParams& params, double p);

// Signed phase integral int_0^z kappa_p(s) ds (adaptive; z may be negative).
double phase_integral(const StaticPotentialSpec& spec,
                      const ParticleParams& params, double p, double z);

// ---------------------------------------------------------------------------
// Mode bundles (mainly for direct inspection and invariant tests; the
// amplitude integrals below never evaluate single-mode phases).

struct WkbModeStatic {
  StaticPotentialSpec spec;
  ParticleParams params;
  double p = 0.0;     // asymptotic momentum on the V = 0 side
  double p0 = 0.0;    // sqrt(p^2 + m^2), conserved energy of the mode
  double hbar = 0.0;

  double kappa_at(double z) const;
  double phase(double z) const;              // int_0^z kappa
  std::complex<double> phi(double z) const;  // sqrt(p/kappa) e^{i phase/hbar}
};

WkbModeStatic wkb_mode_static(const StaticPotentialSpec& spec,
                              const ParticleParams& params, double p,
                              double hbar);

struct WkbModeTime {
  TimePotentialSpec spec;
  ParticleParams params;
  double p = 0.0;     // canonical momentum label (conserved)
  double p0 = 0.0;    // sigma_p(0), energy at the measurement time
  double hbar = 0.0;

  double sigma(double t) const;  // sqrt((p - V(t))^2 + m^2)
  double phase(double t) const;  // int_0^t sigma
  std::complex<double> phi_t(double t) const;  // sqrt(p0/sigma) e^{-i phase/hbar}
};

WkbModeTime wkb_mode_time(const TimePotentialSpec& spec,
                          const ParticleParams& params, double p_canonical,
                          double hbar);

// ---------------------------------------------------------------------------
// Mode pairs entering the one-photon amplitude

// Static profile: energy conservation fixes the partner energy exactly,
// P0 = p0 - hbar k, P = sqrt(P0^2 - m^2).  KinematicsError when the partner
// is below threshold anywhere on the relevant range of V.
struct WkbPairStatic {
  double p = 0.0, p0 = 0.0;  // initial mode
  double P = 0.0, P0 = 0.0;  // partner after emitting (k, theta)
};
WkbPairStatic wkb_pair_static(const Trajectory& traj, double k, double hbar);

// Time profile: canonical momentum conservation fixes the partner label
// exactly, P = p - hbar k cos(theta); P0 = sigma_P(0).
struct WkbPairTime {
  double p = 0.0, p0 = 0.0;
  double P = 0.0, P0 = 0.0;
};
WkbPairTime wkb_pair_time(const Trajectory& traj, double k, double theta,
                          double hbar);

// ---------------------------------------------------------------------------
// Direct finite-hbar amplitudes

struct WkbAmplitudeControl {
  int phase_nodes = 4096;   // nodes of the cumulative phase table
  double rel_tol = 1e-11;   // adaptive quadrature tolerance per component
};

// One-photon emission amplitude (lower-index components, same conventions as
// emission_amplitude) computed from the mode product at finite hbar.  The
// window chi acts on the same retarded coordinate xi = t - z cos(theta) as in
// the classical spectrum.  Requires a trajectory of the matching kind.
AmplitudePair amplitude_direct_static(const Trajectory& traj, double k,
                                      double theta, double hbar,
                                      const CutoffFunction& chi,
                                      const WkbAmplitudeControl& ctl = {});

AmplitudePair amplitude_direct_time(const Trajectory& traj, double k,
                                    double theta, double hbar,
                                    const CutoffFunction& chi,
                                    const WkbAmplitudeControl& ctl = {});

// Dispatch on traj.kind().
AmplitudePair amplitude_direct(const Trajectory& traj, double k, double theta,
                               double hbar, const CutoffFunction& chi,
                               const WkbAmplitudeControl& ctl = {});

// ---------------------------------------------------------------------------
// hbar -> 0 convergence study

struct HbarConvergence {
  std::vector<double> hbars;
  std::vector<AmplitudePair> amplitudes;
  AmplitudePair richardson;  // eliminates the O(hbar) error of the last entry
  double order_t = 0.0;      // fitted convergence rates from the last three
  double order_z = 0.0;
};

// Runs amplitude_direct over a decreasing hbar sequence (default
// {1e-2, 1e-3, 1e-4}; must be >= 3 values with a uniform ratio) and reports
// the fitted first-order rates plus the Richardson-extrapolated limit.
HbarConvergence hbar_convergence(const Trajectory& traj, double k,
                                 double theta, const CutoffFunction& chi,
                                 std::vector<double> hbars = {1e-2, 1e-3,
                                                              1e-4},
                                 const WkbAmplitudeControl& ctl = {});

}  // namespace radshift
