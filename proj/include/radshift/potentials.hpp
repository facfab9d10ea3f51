#pragma once

#include "radshift/errors.hpp"
#include "radshift/smoothstep.hpp"

namespace radshift {

// Value and first two derivatives of a potential profile at one point.  The
// derivative is with respect to z for the static family and t for the
// time-dependent one.
struct PotentialValue {
  double V;
  double d1;
  double d2;
};

// V(z) = V0 exactly for z <= -Z1, 0 exactly for z >= -Z2, with a polynomial
// smoothstep transition on (-Z1, -Z2).  All acceleration of the zeroth-order
// motion is confined to that interval.
struct StaticPotentialSpec {
  double V0 = 0.3;
  double Z1 = 2.0;
  double Z2 = 1.0;
  int smoothness_order = 3;  // continuity class of the transition (>= 2)
};

// V(t) = 0 exactly for t <= t_a, plateau V0 exactly for t >= t_b, smoothstep
// transition between.  The switching interval must close before the
// measurement time: t_b < 0.
struct TimePotentialSpec {
  double V0 = 0.3;
  double t_a = -3.0;
  double t_b = -1.0;
  int smoothness_order = 3;
};

void validate(const StaticPotentialSpec& spec);
void validate(const TimePotentialSpec& spec);

// Prepared evaluators: construction does the (cheap) profile setup once so
// hot loops pay only a polynomial evaluation per call.
class StaticPotential {
 public:
  explicit StaticPotential(const StaticPotentialSpec& spec);
  PotentialValue operator()(double z) const;
  const StaticPotentialSpec& spec() const { return spec_; }
  int profile_order() const { return step_.order(); }

 private:
  StaticPotentialSpec spec_;
  SmoothStepProfile step_;
};

class TimePotential {
 public:
  explicit TimePotential(const TimePotentialSpec& spec);
  PotentialValue operator()(double t) const;
  const TimePotentialSpec& spec() const { return spec_; }
  int profile_order() const { return step_.order(); }

 private:
  TimePotentialSpec spec_;
  SmoothStepProfile step_;
};

// One-shot forms.
PotentialValue eval_static(const StaticPotentialSpec& spec, double z);
PotentialValue eval_time(const TimePotentialSpec& spec, double t);

}  // namespace radshift
