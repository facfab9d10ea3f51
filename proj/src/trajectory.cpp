#include "radshift/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace radshift {

namespace {

double gamma_of(double zdot) { return 1.0 / std::sqrt(1.0 - zdot * zdot); }

// (1 - w^2)^{3/2}, clamped so rejected trial steps can never produce NaN.
double gm3_inv(double w) {
  double s = 1.0 - w * w;
  return (s > 0.0) ? s * std::sqrt(s) : 0.0;
}

}  // namespace

TrajectorySample Trajectory::derive(double t, double z, double zdot) const {
  TrajectorySample s;
  s.t = t;
  s.z = z;
  s.zdot = zdot;
  s.gamma = gamma_of(zdot);
  PotentialValue pv = (kind_ == PotentialKind::static_z)
                          ? std::get<StaticPotential>(potential_)(z)
                          : std::get<TimePotential>(potential_)(t);
  const double m = params_.m;
  const double f = -pv.d1;                // F_ext
  const double inv_mg3 = gm3_inv(zdot) / m;
  s.zddot = f * inv_mg3;
  // dF/dt along the worldline: -V''(z) zdot (static) or -Vddot(t) (time).
  const double fdot =
      (kind_ == PotentialKind::static_z) ? -pv.d2 * zdot : -pv.d2;
  s.zdddot = fdot * inv_mg3 - 3.0 * f * zdot * s.zddot / (m * s.gamma);
  return s;
}

TrajectorySample Trajectory::eval(double t) const {
  if (t >= 0.0) return derive(t, v0_ * t, v0_);
  if (t <= t_min_) return derive(t, z_min_ + v_in_ * (t - t_min_), v_in_);
  auto y = sol_.eval(t);
  return derive(t, y[0], y[1]);
}

double Trajectory::force(double t) const {
  return -potential_at(t).d1;
}

double Trajectory::force_dot(double t) const {
  if (kind_ == PotentialKind::static_z) {
    TrajectorySample s = eval(t);
    return -std::get<StaticPotential>(potential_)(s.z).d2 * s.zdot;
  }
  return -std::get<TimePotential>(potential_)(t).d2;
}

PotentialValue Trajectory::potential_at(double t) const {
  if (kind_ == PotentialKind::static_z)
    return std::get<StaticPotential>(potential_)(eval(t).z);
  return std::get<TimePotential>(potential_)(t);
}

const StaticPotentialSpec& Trajectory::static_spec() const {
  return std::get<StaticPotential>(potential_).spec();
}

const TimePotentialSpec& Trajectory::time_spec() const {
  return std::get<TimePotential>(potential_).spec();
}

double Trajectory::inner_antiderivative(double t) const {
  return inner_cum_(t) - inner_cum_.total();
}

void Trajectory::finish(const GridControl& ctl) {
  const double span = -t_min_;
  std::size_t n =
      std::max<std::size_t>(33, (std::size_t)std::ceil(
                                    ctl.nodes_per_unit * ctl.density * span) +
                                    1);
  grid_.resize(n);
  samples_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = t_min_ + span * (double)i / (double)(n - 1);
    if (i == 0) t = t_min_;
    if (i == n - 1) t = 0.0;
    grid_[i] = t;
    auto y = sol_.eval(t);
    samples_[i] = derive(t, y[0], y[1]);
  }

  // Conservation-law residual on every node.
  double worst = 0.0;
  for (const auto& s : samples_) {
    double lhs;
    if (kind_ == PotentialKind::static_z) {
      lhs = params_.m * s.gamma +
            std::get<StaticPotential>(potential_)(s.z).V - conserved_;
    } else {
      lhs = params_.m * s.gamma * s.zdot +
            std::get<TimePotential>(potential_)(s.t).V - conserved_;
    }
    worst = std::max(worst, std::abs(lhs) / std::abs(conserved_));
    if (!(s.zdot > 0.0))
      throw TurningPointError("trajectory velocity reached zero on the grid");
  }
  conservation_residual_ = worst;
  if (worst > ctl.conservation_bound)
    throw ToleranceError("conservation-law residual " + std::to_string(worst) +
                         " exceeds the configured bound");

  // Inner antiderivative used by the closed-form momentum derivative and the
  // nested classical shift; integrand and its analytic slope per node.
  std::vector<double> f(n), fp(n);
  if (kind_ == PotentialKind::static_z) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = samples_[i];
      double g3 = s.gamma * s.gamma * s.gamma;
      f[i] = 1.0 / (g3 * s.zdot * s.zdot);
      fp[i] = -s.zddot * f[i] *
              (3.0 * s.gamma * s.gamma * s.zdot + 2.0 / s.zdot);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = samples_[i];
      double g3 = s.gamma * s.gamma * s.gamma;
      f[i] = 1.0 / (params_.m * g3);
      fp[i] = -3.0 * s.zdot * s.zddot / (params_.m * s.gamma);
    }
  }
  inner_cum_ = CumulativeIntegral(grid_, std::move(f), std::move(fp));
}

Trajectory integrate_trajectory(const ParticleParams& params,
                                const StaticPotentialSpec& spec, double p_final,
                                const GridControl& ctl) {
  validate(params);
  validate(spec);
  if (!(p_final > 0.0)) throw DomainError("p_final must be positive");
  if (!(std::abs(spec.V0) < 2.0 * params.m))
    throw DomainError("|V0| must stay below 2m (pair-creation threshold)");

  Trajectory tr;
  tr.kind_ = PotentialKind::static_z;
  tr.params_ = params;
  tr.potential_ = StaticPotential(spec);
  tr.p_final_ = p_final;
  tr.p0_ = std::hypot(p_final, params.m);
  tr.v0_ = p_final / tr.p0_;
  tr.conserved_ = tr.p0_;

  // Energy conservation fixes gamma wherever V is known; the incoming plateau
  // has the smallest kinetic energy when V0 > 0.
  const double worst_kin = tr.p0_ - std::max(spec.V0, 0.0);
  if (!(worst_kin > params.m))
    throw TurningPointError(
        "p_final too small: the incoming branch would stall ([p0 - V]^2 <= m^2)");
  const double g_in = (tr.p0_ - spec.V0) / params.m;
  tr.v_in_ = std::sqrt(g_in * g_in - 1.0) / g_in;

  const double v_ramp_min = std::min(tr.v0_, tr.v_in_);
  tr.t_min_ = -(spec.Z2 / tr.v0_ + (spec.Z1 - spec.Z2) / v_ramp_min +
                ctl.padding / tr.v_in_);

  const StaticPotential& V = std::get<StaticPotential>(tr.potential_);
  const double m = params.m;
  auto rhs = [&V, m](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -V(y[0]).d1 * gm3_inv(y[1]) / m};
  };
  OdeControl octl;
  octl.rel_tol = 1e-2 * ctl.rel_tol;
  octl.abs_tol = 1e-2 * ctl.abs_tol;
  tr.sol_ = integrate_ode<2>(rhs, {0.0, tr.v0_}, 0.0, tr.t_min_, octl);
  tr.z_min_ = tr.sol_.eval(tr.t_min_)[0];

  // Acceleration support in time: crossings of -Z1 and -Z2 (z is monotone).
  auto crossing = [&tr](double ztarget) {
    double lo = tr.t_min_, hi = 0.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (tr.sol_.eval(mid)[0] < ztarget) lo = mid;
      else hi = mid;
      if (hi - lo < 1e-14 * (std::abs(lo) + 1.0)) break;
    }
    return 0.5 * (lo + hi);
  };
  tr.t_acc_begin_ = crossing(-spec.Z1);
  tr.t_acc_end_ = crossing(-spec.Z2);

  tr.finish(ctl);
  return tr;
}

Trajectory integrate_trajectory(const ParticleParams& params,
                                const TimePotentialSpec& spec, double p_final,
                                const GridControl& ctl) {
  validate(params);
  validate(spec);
  if (!(p_final > 0.0)) throw DomainError("p_final must be positive");
  if (!(std::abs(spec.V0) < 2.0 * params.m))
    throw DomainError("|V0| must stay below 2m (pair-creation threshold)");

  Trajectory tr;
  tr.kind_ = PotentialKind::time_t;
  tr.params_ = params;
  tr.potential_ = TimePotential(spec);
  tr.p_final_ = p_final;
  tr.p0_ = std::hypot(p_final, params.m);
  tr.v0_ = p_final / tr.p0_;
  // Canonical momentum: m gamma zdot + V(t) is conserved; V(0) sits on the
  // plateau, so the kinetic momentum at the anchor equals p_final.
  tr.conserved_ = p_final + spec.V0;

  // Kinetic momentum ranges over [p_final, p_final + V0] as V sweeps the ramp.
  const double w_min = std::min(p_final, p_final + spec.V0);
  if (!(w_min > 0.0))
    throw TurningPointError(
        "p_final too small: kinetic momentum would reach zero during the ramp");
  const double w_in = p_final + spec.V0;
  tr.v_in_ = w_in / std::hypot(w_in, params.m);

  tr.t_min_ = spec.t_a - ctl.padding;
  tr.t_acc_begin_ = spec.t_a;
  tr.t_acc_end_ = spec.t_b;

  const TimePotential& V = std::get<TimePotential>(tr.potential_);
  const double m = params.m;
  auto rhs = [&V, m](double t, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -V(t).d1 * gm3_inv(y[1]) / m};
  };
  OdeControl octl;
  octl.rel_tol = 1e-2 * ctl.rel_tol;
  octl.abs_tol = 1e-2 * ctl.abs_tol;
  tr.sol_ = integrate_ode<2>(rhs, {0.0, tr.v0_}, 0.0, tr.t_min_, octl);
  tr.z_min_ = tr.sol_.eval(tr.t_min_)[0];

  tr.finish(ctl);
  return tr;
}

double lorentz_dirac_force(const Trajectory& traj, double t) {
  TrajectorySample s = traj.eval(t);
  if (s.zddot == 0.0 && s.zdddot == 0.0) return 0.0;
  const double g = s.gamma;
  const double g3 = g * g * g;
  // d/dt(gamma^3 zddot) = 3 gamma^5 zdot zddot^2 + gamma^3 zdddot.
  const double d = 3.0 * g3 * g * g * s.zdot * s.zddot * s.zddot + g3 * s.zdddot;
  return (2.0 * traj.particle().alpha_c / 3.0) * g * d;
}

double emitted_energy_larmor(const Trajectory& traj) {
  if (!(traj.t_acc_end() > traj.t_acc_begin())) return 0.0;
  auto f = [&traj](double t) {
    TrajectorySample s = traj.eval(t);
    double a = s.gamma * s.gamma * s.gamma * s.zddot;
    return a * a;
  };
  QuadratureControl ctl;
  ctl.rel_tol = 1.0e-13;
  ctl.initial_intervals = 8;
  auto r = integrate_adaptive(f, traj.t_acc_begin(), traj.t_acc_end(), ctl);
  return (2.0 * traj.particle().alpha_c / 3.0) * r.value;
}

}  // namespace radshift
