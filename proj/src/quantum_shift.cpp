#include "radshift/quantum_shift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <vector>

#include "radshift/jacobi.hpp"
#include "radshift/quadrature.hpp"

namespace radshift {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const int w = std::max(1, workers);
  if (w == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futs;
  futs.reserve(w);
  for (int g = 0; g < w; ++g) {
    futs.push_back(std::async(std::launch::async, [&, g]() {
      for (std::size_t i = (std::size_t)g; i < n; i += (std::size_t)w) fn(i);
    }));
  }
  for (auto& f : futs) f.get();
}

// d/dp of (dtau/dxi)^2 = (1 - v^2)/(1 - v c)^2 at constant ramp velocity v.
double dtau_sq_p_derivative(double v, double dv_dp, double c) {
  const double u = 1.0 - v * c;
  return 2.0 * (c - v) / (u * u * u) * dv_dp;
}

struct XiIntegrandFrames {
  const Trajectory* plus;
  const Trajectory* minus;
  double delta_p;
};

// Central difference of the lowered-velocity components at fixed xi.
// Each neighbor trajectory is re-parameterized through its own frame.
struct FixedXiDerivative {
  const Trajectory* tr_plus;
  const Trajectory* tr_minus;
  XiFrame fr_plus;
  XiFrame fr_minus;
  double c;
  double delta_p;

  FixedXiDerivative(const XiIntegrandFrames& fx, double theta)
      : tr_plus(fx.plus),
        tr_minus(fx.minus),
        fr_plus(*fx.plus, theta),
        fr_minus(*fx.minus, theta),
        c(std::cos(theta)),
        delta_p(fx.delta_p) {}

  // (D_t, D_z) = d/dp (dt/dxi, dz/dxi) at fixed xi.
  std::pair<double, double> operator()(double xi) const {
    const double tp = fr_plus.t_of_xi(xi);
    const double tm = fr_minus.t_of_xi(xi);
    const double vp = tr_plus->eval(tp).zdot;
    const double vm = tr_minus->eval(tm).zdot;
    const double up = 1.0 - vp * c;
    const double um = 1.0 - vm * c;
    const double dt = (1.0 / up - 1.0 / um) / (2.0 * delta_p);
    const double dz = (vp / up - vm / um) / (2.0 * delta_p);
    return {dt, dz};
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Route 1

Q1XiResult delta_z_q1_xi(const Trajectory& traj, const CutoffFunction& chi,
                         const Q1XiControl& ctl) {
  if (traj.kind() != PotentialKind::static_z)
    throw DomainError("fixed-xi p-derivative route requires a static profile");
  if (ctl.n_theta < 4) throw DomainError("need at least 4 angular nodes");
  if (!(ctl.delta_p_rel > 0.0))
    throw DomainError("finite-difference step must be positive");

  const double p = traj.p_final();
  const double dp1 = ctl.delta_p_rel * p;
  const double dp2 = 0.5 * dp1;
  const ParticleParams& pp = traj.particle();
  const StaticPotentialSpec& spec = traj.static_spec();
  const Trajectory tr_p1 = integrate_trajectory(pp, spec, p + dp1);
  const Trajectory tr_m1 = integrate_trajectory(pp, spec, p - dp1);
  const Trajectory tr_p2 = integrate_trajectory(pp, spec, p + dp2);
  const Trajectory tr_m2 = integrate_trajectory(pp, spec, p - dp2);
  const XiIntegrandFrames fx1{&tr_p1, &tr_m1, dp1};
  const XiIntegrandFrames fx2{&tr_p2, &tr_m2, dp2};

  // Ramp velocities and their p-derivatives for the window term, by the same
  // central differences (coarse step; the term cancels after dOmega anyway).
  const double v_in = traj.v_in(), v_out = traj.v0();
  const double dvin_dp = (tr_p1.v_in() - tr_m1.v_in()) / (2.0 * dp1);
  const double dvout_dp = (tr_p1.v0() - tr_m1.v0()) / (2.0 * dp1);

  // Window-derivative overlaps Int chi chi' dxi over each ramp (equal to
  // +1/2 and -1/2 for any admissible window; evaluated numerically).
  QuadratureControl wq;
  wq.rel_tol = 1e-12;
  wq.initial_intervals = 8;
  const auto chichip = [&](double xi) { return chi.chi(xi) * chi.chi_prime(xi); };
  const double overlap_rise =
      integrate_adaptive(chichip, chi.lo(), chi.xi_a(), wq).value;
  const double overlap_fall =
      integrate_adaptive(chichip, chi.xi_b(), chi.hi(), wq).value;

  const GaussLegendre gl(ctl.n_theta);
  std::vector<double> main1(gl.x.size()), main2(gl.x.size()),
      cross(gl.x.size());

  parallel_for(gl.x.size(), ctl.workers, [&](std::size_t j) {
    const double c = gl.x[j];
    const double theta = std::acos(c);
    const XiFrame fr(traj, theta);
    const double xi_lo = fr.xi_of_t(traj.t_acc_begin());
    const double xi_hi = fr.xi_of_t(traj.t_acc_end());
    const FixedXiDerivative d1(fx1, theta), d2(fx2, theta);

    const auto make_integrand = [&](const FixedXiDerivative& d) {
      return [&, c](double xi) {
        const double t0 = fr.t_of_xi(xi);
        const XiDerivatives xd = xi_derivatives(traj, theta, t0);
        const auto [Dt, Dz] = d(xi);
        return xd.d2t_dxi2 * Dt - xd.d2z_dxi2 * Dz;
      };
    };
    QuadratureControl qc;
    qc.rel_tol = ctl.rel_tol;
    qc.initial_intervals = 8;
    main1[j] = integrate_adaptive(make_integrand(d1), xi_lo, xi_hi, qc).value;
    main2[j] = integrate_adaptive(make_integrand(d2), xi_lo, xi_hi, qc).value;

    cross[j] = overlap_rise * dtau_sq_p_derivative(v_in, dvin_dp, c) +
               overlap_fall * dtau_sq_p_derivative(v_out, dvout_dp, c);
  });

  double sum1 = 0.0, sum2 = 0.0, sum_cross = 0.0;
  for (std::size_t j = 0; j < gl.x.size(); ++j) {
    sum1 += gl.w[j] * main1[j];
    sum2 += gl.w[j] * main2[j];
    sum_cross += gl.w[j] * cross[j];
  }
  // dOmega = 2 pi dc; overall -(alpha_c / 4 pi).
  const double v1 = -0.5 * pp.alpha_c * sum1;
  const double v2 = -0.5 * pp.alpha_c * sum2;

  Q1XiResult out;
  out.value = (4.0 * v2 - v1) / 3.0;  // Richardson in the step
  out.cross_term = -0.5 * pp.alpha_c * sum_cross;
  const double trunc = std::abs(v2 - v1) / 3.0;
  out.fd_truncation = trunc / std::max(std::abs(out.value), 1e-18);
  if (out.fd_truncation > ctl.richardson_tol)
    throw DerivativeStepError(
        "finite-difference truncation estimate exceeds tolerance; adjust "
        "delta_p_rel");
  return out;
}

// ---------------------------------------------------------------------------
// Route 2

double angular_kernel_sin2(double zdot) {
  if (!(std::abs(zdot) < 1.0)) throw DomainError("|zdot| must be below 1");
  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  qc.initial_intervals = 8;
  const auto f = [&](double c) {
    const double u = 1.0 - zdot * c;
    return (1.0 - c * c) / (u * u * u * u);
  };
  return 2.0 * kPi * integrate_adaptive(f, -1.0, 1.0, qc).value;
}

double angular_kernel_sin2_cos(double zdot) {
  if (!(std::abs(zdot) < 1.0)) throw DomainError("|zdot| must be below 1");
  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  qc.initial_intervals = 8;
  const auto f = [&](double c) {
    const double u = 1.0 - zdot * c;
    return (1.0 - c * c) * c / (u * u * u * u * u);
  };
  return 2.0 * kPi * integrate_adaptive(f, -1.0, 1.0, qc).value;
}

double delta_z_q1_t(const Trajectory& traj, bool closed_kernels) {
  const double ta = traj.t_acc_begin(), tb = traj.t_acc_end();
  if (!(tb > ta)) return 0.0;
  const double alpha = traj.particle().alpha_c;
  const auto integrand = [&](double t) {
    const TrajectorySample s = traj.eval(t);
    if (s.zddot == 0.0 && s.zdddot == 0.0) return 0.0;
    double k4, k5;
    if (closed_kernels) {
      const double g2 = 1.0 / (1.0 - s.zdot * s.zdot);
      k4 = (8.0 * kPi / 3.0) * g2 * g2;
      k5 = (8.0 * kPi / 3.0) * g2 * g2 * g2 * s.zdot;
    } else {
      k4 = angular_kernel_sin2(s.zdot);
      k5 = angular_kernel_sin2_cos(s.zdot);
    }
    return dz_dp_closed_form(traj, t) *
           (s.zdddot * k4 + 3.0 * s.zddot * s.zddot * k5);
  };
  QuadratureControl qc;
  qc.rel_tol = 1e-11;
  qc.initial_intervals = 8;
  return -(alpha / (4.0 * kPi)) * integrate_adaptive(integrand, ta, tb, qc).value;
}

// ---------------------------------------------------------------------------
// Route 3

double delta_z_q1_closed(const Trajectory& traj) {
  const double ta = traj.t_acc_begin(), tb = traj.t_acc_end();
  if (!(tb > ta)) return 0.0;
  const auto integrand = [&](double t) {
    const double f = lorentz_dirac_force(traj, t);
    return (f == 0.0) ? 0.0 : f * dz_dp_closed_form(traj, t);
  };
  QuadratureControl qc;
  qc.rel_tol = 1e-12;
  qc.initial_intervals = 8;
  return -integrate_adaptive(integrand, ta, tb, qc).value;
}

// ---------------------------------------------------------------------------
// delta_z_q2 and the momentum-label Jacobian

double delta_z_q2(const Trajectory& traj, double z0, double E_em) {
  if (traj.kind() == PotentialKind::time_t) return 0.0;
  const double m = traj.particle().m;
  const double p = traj.p_final();
  const double p0 = traj.p0();
  return -(m * m * z0 / (p * p * p0)) * E_em;
}

double dp_dP(const ParticleParams& params, double p, double hbar_k) {
  validate(params);
  if (!(p > 0.0)) throw DomainError("momentum must be positive");
  const double p0 = std::hypot(p, params.m);
  return 1.0 - (params.m * params.m / (p * p * p0)) * hbar_k;
}

// ---------------------------------------------------------------------------

QuantumShiftResult compute_quantum_shift(const Trajectory& traj, double z0,
                                         Q1Route route,
                                         const Q1XiControl& ctl) {
  QuantumShiftResult out;
  out.route_q1 = route;
  switch (route) {
    case Q1Route::xi_integral: {
      const CutoffFunction chi = make_cutoff(traj, 4.0);
      const Q1XiResult r = delta_z_q1_xi(traj, chi, ctl);
      out.delta_z_q1 = r.value;
      out.cross_term = r.cross_term;
      out.fd_truncation = r.fd_truncation;
      break;
    }
    case Q1Route::t_integral:
      out.delta_z_q1 = delta_z_q1_t(traj);
      break;
    case Q1Route::closed_form:
      out.delta_z_q1 = delta_z_q1_closed(traj);
      break;
  }
  out.delta_z_q2 = delta_z_q2(traj, z0, emitted_energy_larmor(traj));
  return out;
}

}  // namespace radshift
