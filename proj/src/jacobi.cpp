#include "radshift/jacobi.hpp"

#include <cmath>
#include <string>

namespace radshift {

LinearizedCoefficients linearized_coefficients(const Trajectory& traj,
                                               double t) {
  TrajectorySample s = traj.eval(t);
  LinearizedCoefficients c;
  const double one_minus = 1.0 - s.zdot * s.zdot;
  c.A = one_minus * std::sqrt(one_minus) / traj.particle().m;
  if (traj.kind() == PotentialKind::static_z)
    c.B = -traj.potential_at(t).d2;
  else
    c.B = 0.0;
  return c;
}

std::pair<double, double> JacobiField::eval(double t) const {
  if (t >= s_) {
    if (has_fwd_) {
      auto y = fwd_.eval(t);
      return {y[0], y[1]};
    }
    if (t - s_ <= 1e-12 * (std::abs(s_) + 1.0)) return {0.0, 1.0};
    throw DomainError("Jacobi field queried past its integrated range");
  }
  if (has_bwd_) {
    auto y = bwd_.eval(t);
    return {y[0], y[1]};
  }
  if (s_ - t <= 1e-12 * (std::abs(s_) + 1.0)) return {0.0, 1.0};
  throw DomainError("Jacobi field queried before its integrated range");
}

JacobiField jacobi_field(const Trajectory& traj, double s) {
  if (s < traj.t_min() || s > 0.0)
    throw DomainError("Jacobi seed time outside [t_min, 0]");

  JacobiField jf;
  jf.s_ = s;

  auto rhs = [&traj](double t, const std::array<double, 2>& y) {
    LinearizedCoefficients c = linearized_coefficients(traj, t);
    return std::array<double, 2>{c.A * y[1], c.B * y[0]};
  };
  OdeControl ctl;
  ctl.rel_tol = 1.0e-12;
  ctl.abs_tol = 1.0e-14;

  const double span = -traj.t_min();
  try {
    if (0.0 - s > 1e-12 * span) {
      jf.fwd_ = integrate_ode<2>(rhs, {0.0, 1.0}, s, 0.0, ctl);
      jf.has_fwd_ = true;
    }
    if (s - traj.t_min() > 1e-12 * span) {
      jf.bwd_ = integrate_ode<2>(rhs, {0.0, 1.0}, s, traj.t_min(), ctl);
      jf.has_bwd_ = true;
    }
  } catch (const IntegrationError& e) {
    throw ToleranceError(std::string("linearized integration failed: ") +
                         e.what());
  }
  return jf;
}

double symplectic_product(const JacobiField& f1, const JacobiField& f2,
                          double t) {
  auto [z1, p1] = f1.eval(t);
  auto [z2, p2] = f2.eval(t);
  return z1 * p2 - p1 * z2;
}

double dz_dp_closed_form(const Trajectory& traj, double t) {
  const double G = traj.inner_antiderivative(t);
  if (traj.kind() == PotentialKind::static_z)
    return (traj.v0() / traj.particle().m) * traj.eval(t).zdot * G;
  return G;  // the time-dependent integrand already carries the 1/m
}

}  // namespace radshift
