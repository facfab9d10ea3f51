#pragma once

#include <variant>
#include <vector>

#include "radshift/ode.hpp"
#include "radshift/params.hpp"
#include "radshift/potentials.hpp"
#include "radshift/quadrature.hpp"

namespace radshift {

enum class PotentialKind { static_z, time_t };

struct GridControl {
  double nodes_per_unit = 256.0;  // stored-sample density per unit time
  double density = 1.0;           // multiplier, swept for convergence studies
  double padding = 1.0;           // start margin before the support
  // Global accuracy targets; the stepper runs its per-step (local) error
  // control two decades tighter so the accumulated drift stays below these.
  double rel_tol = 1.0e-12;
  double abs_tol = 1.0e-12;
  double conservation_bound = 1.0e-10;
};

struct TrajectorySample {
  double t;
  double z;
  double zdot;
  double zddot;   // analytic: F_ext / (m gamma^3); exactly 0 off support
  double zdddot;  // analytic chain rule; exactly 0 off support
  double gamma;
};

// Zeroth-order (radiation-free) worldline anchored at z(0) = 0 with final
// velocity v0, integrated backward in time.  Outside [t_min, 0] the motion is
// exactly linear, so eval() extends analytically in both directions.
class Trajectory {
 public:
  PotentialKind kind() const { return kind_; }
  const ParticleParams& particle() const { return params_; }
  double p_final() const { return p_final_; }
  double p0() const { return p0_; }
  double v0() const { return v0_; }
  // Conserved quantity: p0 (static energy) or canonical momentum (time case).
  double conserved() const { return conserved_; }
  double v_in() const { return v_in_; }
  double t_min() const { return t_min_; }
  double t_acc_begin() const { return t_acc_begin_; }
  double t_acc_end() const { return t_acc_end_; }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<TrajectorySample>& samples() const { return samples_; }
  double conservation_residual() const { return conservation_residual_; }

  TrajectorySample eval(double t) const;

  // External force F_ext(t) = -V'(z(t)) or -Vdot(t) and its time derivative
  // along the worldline.
  double force(double t) const;
  double force_dot(double t) const;
  // Potential value at the worldline point (argument z(t) or t by kind).
  PotentialValue potential_at(double t) const;
  const StaticPotentialSpec& static_spec() const;
  const TimePotentialSpec& time_spec() const;

  // Momentum derivative of the stored-grid antiderivative:
  //   static: int_0^t dt' / (gamma^3 zdot^2);  time: int_0^t dt' / (m gamma^3).
  // Exposed for the closed-form (dz/dp) and the nested classical shift.
  double inner_antiderivative(double t) const;

 private:
  friend Trajectory integrate_trajectory(const ParticleParams&,
                                         const StaticPotentialSpec&, double,
                                         const GridControl&);
  friend Trajectory integrate_trajectory(const ParticleParams&,
                                         const TimePotentialSpec&, double,
                                         const GridControl&);
  void finish(const GridControl& ctl);
  TrajectorySample derive(double t, double z, double zdot) const;

  PotentialKind kind_{};
  ParticleParams params_{};
  std::variant<StaticPotential, TimePotential> potential_{
      StaticPotential{StaticPotentialSpec{}}};
  double p_final_ = 0.0, p0_ = 0.0, v0_ = 0.0, conserved_ = 0.0, v_in_ = 0.0;
  double t_min_ = 0.0, t_acc_begin_ = 0.0, t_acc_end_ = 0.0;
  double z_min_ = 0.0;  // z(t_min), for the backward linear extension
  OdeSolution<2> sol_;
  std::vector<double> grid_;
  std::vector<TrajectorySample> samples_;
  CumulativeIntegral inner_cum_;
  double conservation_residual_ = 0.0;
};

Trajectory integrate_trajectory(const ParticleParams& params,
                                const StaticPotentialSpec& spec, double p_final,
                                const GridControl& ctl = {});
Trajectory integrate_trajectory(const ParticleParams& params,
                                const TimePotentialSpec& spec, double p_final,
                                const GridControl& ctl = {});

// F_LD(t) = (2 alpha_c / 3) gamma d/dt(gamma^3 zddot), evaluated analytically;
// exactly 0 off the acceleration support.
double lorentz_dirac_force(const Trajectory& traj, double t);

// Energy radiated by the zeroth-order trajectory (relativistic Larmor):
//   E = (2 alpha_c / 3) int (gamma^3 zddot)^2 dt.
double emitted_energy_larmor(const Trajectory& traj);

}  // namespace radshift
