#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <radshift/emission.hpp>
#include <radshift/errors.hpp>
#include <radshift/quadrature.hpp>
#include <radshift/trajectory.hpp>
#include <radshift/wkb.hpp>

using namespace radshift;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kAlpha = 1e-3;
constexpr double kP = 1.5;

ParticleParams params() {
  ParticleParams pp;
  pp.m = 1.0;
  pp.alpha_c = kAlpha;
  return pp;
}

StaticPotentialSpec std_spec() {
  StaticPotentialSpec spec;
  spec.V0 = 0.3;
  spec.Z1 = 2.0;
  spec.Z2 = 1.0;
  return spec;
}

Trajectory std_static() { return integrate_trajectory(params(), std_spec(), kP); }

Trajectory free_static() {
  StaticPotentialSpec spec = std_spec();
  spec.V0 = 0.0;
  return integrate_trajectory(params(), spec, kP);
}

Trajectory std_time() {
  TimePotentialSpec spec;
  spec.V0 = 0.3;
  spec.t_a = -3.0;
  spec.t_b = -1.0;
  return integrate_trajectory(params(), spec, kP);
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double crel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("local momentum: closed forms, trajectory oracle, turning point") {
  const StaticPotentialSpec spec = std_spec();
  const ParticleParams pp = params();
  const double p0 = std::hypot(kP, pp.m);

  // V = 0 exactly on both sides of the ramp's right edge.
  CHECK(rel(kappa(spec, pp, kP, 0.0), kP) < 1e-14);
  CHECK(rel(kappa(spec, pp, kP, 2.0), kP) < 1e-14);
  // Plateau closed form.
  const double kap_plateau = std::sqrt((p0 - spec.V0) * (p0 - spec.V0) - 1.0);
  CHECK(rel(kappa(spec, pp, kP, -3.0), kap_plateau) < 1e-14);

  // Energy conservation makes m*gamma*zdot along the zeroth-order trajectory
  // an independent oracle for kappa at the same position.
  const Trajectory tr = std_static();
  const double t_mid = 0.5 * (tr.t_acc_begin() + tr.t_acc_end());
  const TrajectorySample s = tr.eval(t_mid);
  const double gamma = 1.0 / std::sqrt(1.0 - s.zdot * s.zdot);
  CHECK(rel(kappa(spec, pp, kP, s.z), pp.m * gamma * s.zdot) < 1e-10);

  // A slow mode is classically forbidden on the plateau.
  CHECK_THROWS_AS(kappa(spec, pp, 0.5, -3.0), TurningPointError);
  CHECK_THROWS_AS(kappa(spec, pp, -1.0, 0.0), DomainError);
}

TEST_CASE("validity measure: trivial zero, steepness growth, FD oracle") {
  const ParticleParams pp = params();

  StaticPotentialSpec flat = std_spec();
  flat.V0 = 0.0;
  CHECK(wkb_validity(flat, pp, kP) == 0.0);

  const StaticPotentialSpec spec = std_spec();
  const double val = wkb_validity(spec, pp, kP);
  CHECK(val > 0.0);

  // Finite-difference oracle: max over a dense scan of the centered
  // difference of 1/kappa.
  const double delta = 1e-6;
  double fd_max = 0.0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double z = -spec.Z1 + (spec.Z1 - spec.Z2) * i / n;
    const double up = 1.0 / kappa(spec, pp, kP, z + delta);
    const double dn = 1.0 / kappa(spec, pp, kP, z - delta);
    fd_max = std::max(fd_max, std::abs(up - dn) / (2.0 * delta));
  }
  CHECK(rel(val, fd_max) < 1e-6);

  // Halving the ramp width doubles the gradient scale: strictly larger.
  StaticPotentialSpec steep = std_spec();
  steep.Z1 = 1.5;
  CHECK(wkb_validity(steep, pp, kP) > val);
}

TEST_CASE("phase integral: anchor, free closed form, additivity") {
  const StaticPotentialSpec spec = std_spec();
  const ParticleParams pp = params();

  CHECK(phase_integral(spec, pp, kP, 0.0) == 0.0);

  // Right of the ramp V = 0, so the phase is exactly p*z.
  CHECK(rel(phase_integral(spec, pp, kP, 1.7), kP * 1.7) < 1e-13);

  StaticPotentialSpec flat = std_spec();
  flat.V0 = 0.0;
  CHECK(rel(phase_integral(flat, pp, kP, -2.3), kP * (-2.3)) < 1e-13);

  // Additivity across an interior point.
  const double z1 = -1.2, z2 = -2.5;
  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  qc.initial_intervals = 4;
  const double middle =
      integrate_adaptive([&](double z) { return kappa(spec, pp, kP, z); }, z1,
                         z2, qc)
          .value;
  const double lhs = phase_integral(spec, pp, kP, z1) + middle;
  const double rhs = phase_integral(spec, pp, kP, z2);
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
}

TEST_CASE("mode bundles: unit normalization and the amplitude law") {
  const ParticleParams pp = params();
  const WkbModeStatic mode = wkb_mode_static(std_spec(), pp, kP, 1e-3);
  CHECK(std::abs(mode.phi(0.0) - 1.0) < 1e-13);
  for (double z : {-3.0, -1.7, -1.3, 0.8}) {
    const double law = std::norm(mode.phi(z)) * mode.kappa_at(z) / mode.p;
    CHECK(std::abs(law - 1.0) < 1e-12);
  }
  // The phase accumulates monotonically with z.
  CHECK(mode.phase(-2.0) < mode.phase(-1.0));
  CHECK(mode.phase(-1.0) < 0.0);

  TimePotentialSpec tspec;
  tspec.V0 = 0.3;
  tspec.t_a = -3.0;
  tspec.t_b = -1.0;
  const Trajectory tr = std_time();
  const WkbModeTime tmode = wkb_mode_time(tspec, pp, tr.conserved(), 1e-3);
  CHECK(rel(tmode.p0, std::hypot(kP, pp.m)) < 1e-14);
  CHECK(std::abs(tmode.phi_t(0.0) - 1.0) < 1e-13);
  for (double t : {-5.0, -2.0, -1.2, 0.5}) {
    const double law = std::norm(tmode.phi_t(t)) * tmode.sigma(t) / tmode.p0;
    CHECK(std::abs(law - 1.0) < 1e-12);
  }
  // Before the switch-on V = 0, so sigma is the free energy of the canonical
  // label.
  CHECK(rel(tmode.sigma(-5.0), std::hypot(tr.conserved(), pp.m)) < 1e-14);
}

TEST_CASE("mode-product phase approaches the classical retarded phase") {
  const Trajectory tr = std_static();
  const StaticPotentialSpec spec = std_spec();
  const ParticleParams pp = params();
  const double k = 2.0;

  // Stable difference quotient q = (kappa_p - kappa_P)/hbar along the
  // trajectory; its time integral must collapse to k * t as hbar -> 0.
  const auto max_defect = [&](double hbar) {
    const WkbPairStatic pair = wkb_pair_static(tr, k, hbar);
    const auto f = [&](double t) {
      const TrajectorySample s = tr.eval(t);
      const PotentialValue pv = tr.potential_at(t);
      const double kp = std::sqrt((pair.p0 - pv.V) * (pair.p0 - pv.V) - 1.0);
      const double kP = std::sqrt((pair.P0 - pv.V) * (pair.P0 - pv.V) - 1.0);
      return s.zdot * k * (pair.p0 + pair.P0 - 2.0 * pv.V) / (kp + kP);
    };
    QuadratureControl qc;
    qc.rel_tol = 1e-12;
    qc.initial_intervals = 4;
    double worst = 0.0;
    for (double t : {tr.t_acc_begin() - 1.0, tr.t_acc_begin(),
                     0.5 * (tr.t_acc_begin() + tr.t_acc_end()),
                     tr.t_acc_end(), 0.5}) {
      const double acc = integrate_adaptive(f, 0.0, t, qc).value;
      worst = std::max(worst, std::abs(acc - k * t));
    }
    return worst;
  };

  const double d1 = max_defect(1e-3);
  const double d2 = max_defect(5e-4);
  CHECK(d1 > 0.0);
  const double ratio = d1 / d2;
  CHECK(ratio > 1.7);
  CHECK(ratio < 2.3);
  MESSAGE("phase-law linear coefficient C = ", d1 / 1e-3,
          " (defect = C*hbar at hbar = 1e-3)");
  (void)spec;
  (void)pp;
}

TEST_CASE("k = 0 amplitudes are real window integrals") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 4.0);
  const double theta = 1.1;
  const AmplitudePair amp = amplitude_direct_static(tr, 0.0, theta, 1e-3, chi);

  CHECK(std::abs(amp.A_t.imag()) < 1e-14 * std::abs(amp.A_t.real()));
  CHECK(std::abs(amp.A_z.imag()) < 1e-14 * std::abs(amp.A_z.real()));

  // At k = 0 the mode product collapses: A_t = -e int chi dt along the
  // trajectory, A_z = e int zdot chi dt.
  const XiFrame fr(tr, theta);
  const double c = std::cos(theta);
  const double t_lo = fr.t_of_xi(chi.lo());
  const double t_hi = fr.t_of_xi(chi.hi());
  const double e = std::sqrt(4.0 * kPi * kAlpha);
  QuadratureControl qc;
  qc.rel_tol = 1e-12;
  qc.initial_intervals = 16;
  const double it =
      integrate_adaptive(
          [&](double t) {
            const TrajectorySample s = tr.eval(t);
            return chi.chi(s.t - s.z * c);
          },
          t_lo, t_hi, qc)
          .value;
  const double iz =
      integrate_adaptive(
          [&](double t) {
            const TrajectorySample s = tr.eval(t);
            return s.zdot * chi.chi(s.t - s.z * c);
          },
          t_lo, t_hi, qc)
          .value;
  CHECK(rel(amp.A_t.real(), -e * it) < 1e-9);
  CHECK(rel(amp.A_z.real(), e * iz) < 1e-9);
}

TEST_CASE("free potential: amplitude equals the windowed plane-wave overlap") {
  const Trajectory tr = free_static();
  const CutoffFunction chi = make_cutoff(tr, 4.0);
  const double hbar = 1e-2, k = 1.7, theta = 2.0;
  const double c = std::cos(theta);
  const AmplitudePair amp = amplitude_direct_static(tr, k, theta, hbar, chi);

  const WkbPairStatic pair = wkb_pair_static(tr, k, hbar);
  const double v0 = tr.v0();
  const double qbar = k * (pair.p0 + pair.P0) / (pair.p + pair.P);
  const double e = std::sqrt(4.0 * kPi * kAlpha);
  const XiFrame fr(tr, theta);
  const double t_lo = fr.t_of_xi(chi.lo());
  const double t_hi = fr.t_of_xi(chi.hi());

  QuadratureControl qc;
  qc.rel_tol = 1e-12;
  qc.initial_intervals = 16;
  const std::complex<double> kI{0.0, 1.0};
  const auto base = [&](double t) {
    return chi.chi(t * (1.0 - v0 * c)) *
           std::exp(kI * ((qbar - k * c) * v0 * t));
  };
  const std::complex<double> overlap =
      integrate_adaptive([&](double t) { return v0 * base(t); }, t_lo, t_hi,
                         qc)
          .value;
  const std::complex<double> ref_t = -e * (pair.p0 / pair.p) * overlap;
  const std::complex<double> ref_z =
      e * ((pair.p + pair.P) / (2.0 * pair.p)) * overlap;

  CHECK(crel(amp.A_t, ref_t) < 1e-9);
  CHECK(crel(amp.A_z, ref_z) < 1e-9);
}

TEST_CASE("partner below threshold raises kinematics errors") {
  const Trajectory free_tr = free_static();
  const CutoffFunction chi_free = make_cutoff(free_tr, 3.0);
  // p0 = 1.803, hbar*k = 0.85 -> P0 = 0.953 < m.
  CHECK_THROWS_AS(
      amplitude_direct_static(free_tr, 85.0, 0.7, 1e-2, chi_free),
      KinematicsError);

  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 3.0);
  // P0 = 1.203 clears m but not m + V0 on the plateau.
  CHECK_THROWS_AS(amplitude_direct_static(tr, 60.0, 0.7, 1e-2, chi),
                  KinematicsError);
  // Same photon against the weaker constraint still works.
  CHECK_NOTHROW(amplitude_direct_static(tr, 40.0, 0.7, 1e-2, chi));
}

TEST_CASE("hbar sequence: first-order rate and Richardson limit (static)") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 4.0);
  const double pairs[][2] = {{2.0, kPi / 3.0}, {1.2, 1.9}, {3.0, 0.8}};
  for (const auto& kt : pairs) {
    const double k = kt[0], theta = kt[1];
    const HbarConvergence hc = hbar_convergence(tr, k, theta, chi);
    CHECK(hc.order_t > 0.8);
    CHECK(hc.order_t < 1.2);
    CHECK(hc.order_z > 0.8);
    CHECK(hc.order_z < 1.2);
    const AmplitudePair ref =
        emission_amplitude(tr, k, theta, chi, AmplitudeForm::velocity);
    CHECK(crel(hc.richardson.A_t, ref.A_t) < 1e-4);
    CHECK(crel(hc.richardson.A_z, ref.A_z) < 1e-4);
  }
}

TEST_CASE("hbar sequence: first-order rate and Richardson limit (time)") {
  const Trajectory tr = std_time();
  const CutoffFunction chi = make_cutoff(tr, 4.0);
  const double pairs[][2] = {{1.5, 1.0}, {2.0, 2.2}, {0.8, 0.5}};
  for (const auto& kt : pairs) {
    const double k = kt[0], theta = kt[1];
    const HbarConvergence hc = hbar_convergence(tr, k, theta, chi);
    CHECK(hc.order_t > 0.8);
    CHECK(hc.order_t < 1.2);
    CHECK(hc.order_z > 0.8);
    CHECK(hc.order_z < 1.2);
    const AmplitudePair ref =
        emission_amplitude(tr, k, theta, chi, AmplitudeForm::velocity);
    CHECK(crel(hc.richardson.A_t, ref.A_t) < 1e-4);
    CHECK(crel(hc.richardson.A_z, ref.A_z) < 1e-4);
  }
}

TEST_CASE("hbar sequence input validation") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 3.0);
  CHECK_THROWS_AS(hbar_convergence(tr, 1.0, 1.0, chi, {1e-2, 1e-3}),
                  DomainError);
  CHECK_THROWS_AS(hbar_convergence(tr, 1.0, 1.0, chi, {1e-2, 1e-3, 2e-4}),
                  DomainError);
  CHECK_THROWS_AS(hbar_convergence(tr, 1.0, 1.0, chi, {1e-4, 1e-3, 1e-2}),
                  DomainError);
}
