#pragma once

#include <stdexcept>
#include <string>

namespace radshift {

// Base type for every failure the library raises on purpose, so callers can
// distinguish physics/configuration problems from genuine bugs.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameter values (non-positive widths, even profile order, ...).
struct DomainError : Error {
  using Error::Error;
};

// The zeroth-order motion would stall: the conserved quantity does not leave
// room for a strictly positive velocity everywhere on the trajectory.
struct TurningPointError : Error {
  using Error::Error;
};

// The cutoff plateau fails to contain the image of the acceleration support.
struct CutoffCoverageError : Error {
  using Error::Error;
};

// A finite-hbar mode would be evanescent (radicand of a local momentum or
// energy turned non-positive) for the requested photon momentum.
struct KinematicsError : Error {
  using Error::Error;
};

// The spectral tail estimate stayed above tolerance at the largest allowed k.
struct TailError : Error {
  using Error::Error;
};

// Richardson step-doubling could not certify the finite-difference momentum
// derivative to the requested accuracy.
struct DerivativeStepError : Error {
  using Error::Error;
};

// An adaptive quadrature exhausted its subdivision budget.
struct QuadratureError : Error {
  using Error::Error;
};

// A computed residual exceeded its configured bound (harness exit code 1).
struct ToleranceError : Error {
  using Error::Error;
};

// Malformed or inconsistent experiment configuration (harness exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace radshift
