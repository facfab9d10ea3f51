#pragma once

#include <utility>

#include "radshift/ode.hpp"
#include "radshift/trajectory.hpp"

namespace radshift {

// Coefficients of the dynamics linearized about a trajectory:
//   d(Dz)/dt = A(t) DP,   d(DP)/dt = B(t) Dz,
// with DP the perturbation of the conserved (canonical) momentum label.
struct LinearizedCoefficients {
  double A = 0.0;
  double B = 0.0;
};

LinearizedCoefficients linearized_coefficients(const Trajectory& traj,
                                               double t);

// Solution of the linearized system seeded at time s with (Dz, DP) = (0, 1).
class JacobiField {
 public:
  double seed_time() const { return s_; }

  // (Dz, DP) at time t; valid on [t_min, 0].
  std::pair<double, double> eval(double t) const;
  double Dz(double t) const { return eval(t).first; }
  double DP(double t) const { return eval(t).second; }

 private:
  friend JacobiField jacobi_field(const Trajectory&, double);
  double s_ = 0.0;
  bool has_fwd_ = false;
  bool has_bwd_ = false;
  OdeSolution<2> fwd_;
  OdeSolution<2> bwd_;
};

JacobiField jacobi_field(const Trajectory& traj, double s);

// Dz1(t) DP2(t) - DP1(t) Dz2(t); conserved along the trajectory.
double symplectic_product(const JacobiField& f1, const JacobiField& f2,
                          double t);

// (dz/dp)(t) at fixed t from the quadrature form of the Jacobi field seeded
// at the anchor; agrees with jacobi_field(traj, 0).Dz(t) up to sign
// conventions of the seed (this is the derivative of z(t) with respect to the
// final-momentum label).
double dz_dp_closed_form(const Trajectory& traj, double t);

}  // namespace radshift
