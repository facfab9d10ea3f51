#include "radshift/potentials.hpp"

#include <cmath>

namespace radshift {

namespace {

int profile_order_for(int smoothness_order) {
  if (smoothness_order < 2)
    throw DomainError("smoothness_order must be at least 2");
  return 2 * smoothness_order + 1;
}

}  // namespace

void validate(const StaticPotentialSpec& spec) {
  if (!(spec.Z1 > spec.Z2 && spec.Z2 > 0.0))
    throw DomainError("static potential requires Z1 > Z2 > 0");
  if (!std::isfinite(spec.V0)) throw DomainError("V0 must be finite");
  profile_order_for(spec.smoothness_order);
}

void validate(const TimePotentialSpec& spec) {
  if (!(spec.t_a < spec.t_b && spec.t_b < 0.0))
    throw DomainError("time potential requires t_a < t_b < 0");
  if (!std::isfinite(spec.V0)) throw DomainError("V0 must be finite");
  profile_order_for(spec.smoothness_order);
}

StaticPotential::StaticPotential(const StaticPotentialSpec& spec)
    : spec_(spec),
      step_(profile_order_for(spec.smoothness_order), -spec.Z1, -spec.Z2) {
  validate(spec);
}

PotentialValue StaticPotential::operator()(double z) const {
  // V descends from the plateau: V = V0 (1 - S(z)).
  if (z <= -spec_.Z1) return {spec_.V0, 0.0, 0.0};
  if (z >= -spec_.Z2) return {0.0, 0.0, 0.0};
  return {spec_.V0 * (1.0 - step_.value(z)), -spec_.V0 * step_.deriv1(z),
          -spec_.V0 * step_.deriv2(z)};
}

TimePotential::TimePotential(const TimePotentialSpec& spec)
    : spec_(spec),
      step_(profile_order_for(spec.smoothness_order), spec.t_a, spec.t_b) {
  validate(spec);
}

PotentialValue TimePotential::operator()(double t) const {
  if (t <= spec_.t_a) return {0.0, 0.0, 0.0};
  if (t >= spec_.t_b) return {spec_.V0, 0.0, 0.0};
  return {spec_.V0 * step_.value(t), spec_.V0 * step_.deriv1(t),
          spec_.V0 * step_.deriv2(t)};
}

PotentialValue eval_static(const StaticPotentialSpec& spec, double z) {
  return StaticPotential(spec)(z);
}

PotentialValue eval_time(const TimePotentialSpec& spec, double t) {
  return TimePotential(spec)(t);
}

}  // namespace radshift
