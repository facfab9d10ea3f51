#pragma once

#include "radshift/errors.hpp"

namespace radshift {

// Mass and coupling of the radiating charge.  Units are natural (c = 1);
// alpha_c = e^2 / (4 pi) multiplies every radiative quantity linearly.
struct ParticleParams {
  double m = 1.0;
  double alpha_c = 1.0e-3;
};

inline void validate(const ParticleParams& p) {
  if (!(p.m > 0.0)) throw DomainError("particle mass must be positive");
  if (!(p.alpha_c >= 0.0)) throw DomainError("coupling alpha_c must be non-negative");
}

}  // namespace radshift
