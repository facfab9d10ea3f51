#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <radshift/classical_shift.hpp>
#include <radshift/emission.hpp>
#include <radshift/errors.hpp>
#include <radshift/quadrature.hpp>
#include <radshift/trajectory.hpp>

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

Trajectory std_static() {
  StaticPotentialSpec spec;
  spec.V0 = 0.3;
  spec.Z1 = 2.0;
  spec.Z2 = 1.0;
  return integrate_trajectory(params(), spec, kP);
}

Trajectory free_static() {
  StaticPotentialSpec spec;
  spec.V0 = 0.0;
  spec.Z1 = 2.0;
  spec.Z2 = 1.0;
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

}  // namespace

TEST_CASE("cutoff window: exact plateau, closed-form slope integral") {
  const CutoffFunction chi(-4.0, 1.0, 2.5, 3);

  CHECK(chi.chi(-6.5) == 0.0);
  CHECK(chi.chi(-8.0) == 0.0);
  CHECK(chi.chi(3.5) == 0.0);
  CHECK(chi.chi(-4.0) == 1.0);
  CHECK(chi.chi(-1.5) == 1.0);
  CHECK(chi.chi(1.0) == 1.0);
  CHECK(chi.chi(-5.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(chi.chi_prime(-5.25) > 0.0);
  CHECK(chi.chi_prime(2.25) < 0.0);
  CHECK(chi.chi_prime(-1.5) == 0.0);

  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  const double direct =
      integrate_adaptive([&](double x) { return chi.chi_prime(x) * chi.chi_prime(x); },
                         chi.lo(), chi.hi(), qc)
          .value;
  CHECK(rel(direct, chi.slope_sq_integral()) < 1e-12);
  CHECK(chi.c_profile() == doctest::Approx(chi.width() * chi.slope_sq_integral())
                               .epsilon(1e-14));

  CHECK_THROWS_AS(CutoffFunction(0.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(CutoffFunction(0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("make_cutoff plateau covers the support image at every angle") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 3.0);
  for (double theta : {0.0, 0.31, kPi / 2, 2.4, kPi}) {
    const XiFrame fr(tr, theta);
    CHECK(fr.xi_of_t(tr.t_acc_begin()) >= chi.xi_a() - 1e-12);
    CHECK(fr.xi_of_t(tr.t_acc_end()) <= chi.xi_b() + 1e-12);
  }

  // A plateau that misses part of the support must be rejected.
  const CutoffFunction bad(-1.0, 0.0, 1.0);
  CHECK_THROWS_AS(emission_amplitude(tr, 2.0, kPi / 3, bad), CutoffCoverageError);
}

TEST_CASE("xi frame: monotone map and round trip") {
  const Trajectory tr = std_static();
  for (double theta : {0.3, kPi / 2, 2.5}) {
    const XiFrame fr(tr, theta);
    for (double t : {-3.5, -1.7, -0.4, 0.6}) {
      CHECK(fr.dxi_dt(t) > 0.0);
      const double xi = fr.xi_of_t(t);
      CHECK(std::abs(fr.t_of_xi(xi) - t) < 1e-12 * (1.0 + std::abs(t)));
    }
  }
}

TEST_CASE("xi derivatives: trivial zeros and the contraction identity") {
  const Trajectory fr_tr = free_static();
  const XiDerivatives d0 = xi_derivatives(fr_tr, 0.7, -2.0);
  CHECK(d0.d2z_dxi2 == 0.0);
  CHECK(d0.d2t_dxi2 == 0.0);
  CHECK(d0.d3z_dxi3 == 0.0);

  const Trajectory tr = std_static();
  // cos(pi/2) is zero to machine precision, so d2t collapses with it.
  const XiDerivatives dq = xi_derivatives(tr, kPi / 2, -1.8);
  CHECK(std::abs(dq.d2t_dxi2) <= 1e-15 * std::abs(dq.d2z_dxi2));

  for (double theta : {0.4, 1.2, 2.8}) {
    const double c = std::cos(theta);
    for (double t : {-2.5, -1.8, -1.2}) {
      const XiDerivatives d = xi_derivatives(tr, theta, t);
      const TrajectorySample s = tr.eval(t);
      const double u = 1.0 - s.zdot * c;
      const double lhs = d.d2t_dxi2 * d.d2t_dxi2 - d.d2z_dxi2 * d.d2z_dxi2;
      const double rhs = -s.zddot * s.zddot * (1.0 - c * c) / std::pow(u, 6);
      CHECK(rel(lhs, rhs) < 1e-13);
      // The angular density of the time-domain energy is a square:
      CHECK(-lhs * u >= 0.0);
      // dtau/dxi closes the frame bookkeeping.
      CHECK(rel(d.dtau_dxi, 1.0 / (s.gamma * u)) < 1e-14);
    }
  }
}

TEST_CASE("velocity and ibp amplitude forms agree") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 5.0);
  struct Probe {
    double k, theta;
  };
  for (const Probe pr : {Probe{2.0, kPi / 3}, Probe{0.7, 2.2}}) {
    const AmplitudePair v =
        emission_amplitude(tr, pr.k, pr.theta, chi, AmplitudeForm::velocity);
    const AmplitudePair b =
        emission_amplitude(tr, pr.k, pr.theta, chi, AmplitudeForm::ibp);
    const double scale = std::abs(v.A_t) + std::abs(v.A_z);
    CHECK(std::abs(v.A_t - b.A_t) < 1e-8 * scale);
    CHECK(std::abs(v.A_z - b.A_z) < 1e-8 * scale);
  }

  const Trajectory td = std_time();
  const CutoffFunction chi_t = make_cutoff(td, 4.0);
  const AmplitudePair v = emission_amplitude(td, 1.5, 1.0, chi_t,
                                             AmplitudeForm::velocity);
  const AmplitudePair b = emission_amplitude(td, 1.5, 1.0, chi_t,
                                             AmplitudeForm::ibp);
  const double scale = std::abs(v.A_t) + std::abs(v.A_z);
  CHECK(std::abs(v.A_t - b.A_t) < 1e-8 * scale);
  CHECK(std::abs(v.A_z - b.A_z) < 1e-8 * scale);
}

TEST_CASE("adaptive and Filon branches agree on the same amplitude") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 5.0);
  AmplitudeControl force_filon;
  force_filon.filon_threshold = 0.0;
  for (double k : {0.8, 2.0, 3.1}) {
    for (AmplitudeForm form : {AmplitudeForm::velocity, AmplitudeForm::ibp}) {
      const AmplitudePair gk = emission_amplitude(tr, k, kPi / 3, chi, form);
      const AmplitudePair fi =
          emission_amplitude(tr, k, kPi / 3, chi, form, force_filon);
      const double scale = std::abs(gk.A_t) + std::abs(gk.A_z);
      CHECK(std::abs(gk.A_t - fi.A_t) < 1e-8 * scale);
      CHECK(std::abs(gk.A_z - fi.A_z) < 1e-8 * scale);
    }
  }
}

TEST_CASE("reality: conjugating k conjugates the amplitude") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 4.0);
  AmplitudeControl force_filon;
  force_filon.filon_threshold = 0.0;
  for (double k : {1.3, 2.6}) {
    const AmplitudePair plus = emission_amplitude(tr, k, 1.1, chi);
    const AmplitudePair minus = emission_amplitude(tr, -k, 1.1, chi);
    CHECK(std::abs(minus.A_t - std::conj(plus.A_t)) <
          1e-12 * (1.0 + std::abs(plus.A_t)));
    CHECK(std::abs(minus.A_z - std::conj(plus.A_z)) <
          1e-12 * (1.0 + std::abs(plus.A_z)));

    const AmplitudePair fplus = emission_amplitude(tr, k, 1.1, chi,
                                                   AmplitudeForm::ibp, force_filon);
    const AmplitudePair fminus = emission_amplitude(tr, -k, 1.1, chi,
                                                    AmplitudeForm::ibp, force_filon);
    CHECK(std::abs(fminus.A_t - std::conj(fplus.A_t)) <
          1e-12 * (1.0 + std::abs(fplus.A_t)));
    CHECK(std::abs(fminus.A_z - std::conj(fplus.A_z)) <
          1e-12 * (1.0 + std::abs(fplus.A_z)));
  }
}

TEST_CASE("large-k decay of the ibp amplitude") {
  const Trajectory tr = std_static();
  const CutoffFunction chi = make_cutoff(tr, 5.0);
  double logk[5], logA[5];
  const double ks[5] = {10.0, 14.0, 20.0, 28.0, 40.0};
  for (int i = 0; i < 5; ++i) {
    const AmplitudePair a = emission_amplitude(tr, ks[i], kPi / 3, chi);
    logk[i] = std::log(ks[i]);
    logA[i] = std::log(std::hypot(std::abs(a.A_t), std::abs(a.A_z)));
  }
  // Least-squares slope of log|A| vs log k; the 1/k prefactor alone
  // guarantees at least first-order decay and the smooth window much more.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 5; ++i) {
    sx += logk[i];
    sy += logA[i];
    sxx += logk[i] * logk[i];
    sxy += logk[i] * logA[i];
  }
  const double slope = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
  CHECK(-slope >= 1.0);
}

TEST_CASE("solid angle of (dtau/dxi)^2 is 4 pi at every speed") {
  for (double v : {0.0, 0.3, 0.8, 0.99}) {
    CHECK(std::abs(solid_angle_dtau_sq(v) - 4.0 * kPi) < 1e-10);
  }
  CHECK_THROWS_AS(solid_angle_dtau_sq(1.0), DomainError);
}

TEST_CASE("time-domain energy equals the Larmor route") {
  const Trajectory fr_tr = free_static();
  CHECK(energy_time_domain(fr_tr) == 0.0);

  const Trajectory tr = std_static();
  const double larmor = emitted_energy_larmor(tr);
  CHECK(larmor > 0.0);
  CHECK(rel(energy_time_domain(tr), larmor) < 1e-10);

  const Trajectory td = std_time();
  CHECK(rel(energy_time_domain(td), emitted_energy_larmor(td)) < 1e-10);
}

namespace {

SpectralControl test_spectral_control(int workers = 1) {
  SpectralControl ctl;
  ctl.n_theta = 40;
  ctl.nodes_per_panel = 24;
  ctl.k_panel_width = 2.0;
  ctl.tail_rel_tol = 3e-6;
  ctl.amplitude.support_nodes = 768;
  ctl.amplitude.ramp_nodes = 256;
  ctl.workers = workers;
  return ctl;
}

}  // namespace

TEST_CASE("spectral energy: artifact law, extrapolation, Larmor agreement") {
  const Trajectory tr = std_static();
  const double larmor = emitted_energy_larmor(tr);
  const SpectralControl ctl = test_spectral_control(4);

  const ExtrapolatedSpectral ex = extrapolate_spectral_energy(tr, 5.0, 0.0, ctl);

  // The closed-form artifact is -alpha c_profile / W, so doubling W halves it.
  CHECK(ex.at_w.artifact < 0.0);
  CHECK(std::abs(ex.at_2w.artifact / ex.at_w.artifact - 0.5) < 1e-13);

  // Subtracted energies at both widths, the W-extrapolation, and the
  // time-domain oracle all agree.
  CHECK(rel(ex.at_w.E_em, larmor) < 1e-3);
  CHECK(rel(ex.at_2w.E_em, larmor) < 1e-3);
  CHECK(rel(ex.E_extr, larmor) < 1e-3);
  CHECK(ex.disagreement < 1e-4 * larmor);
  CHECK(ex.at_w.tail_estimate < ctl.tail_rel_tol * std::abs(ex.at_w.E_raw));
  CHECK(ex.at_w.slope > 1.5);
  CHECK(ex.at_w.k_used > 0.0);
}

TEST_CASE("spectral energy: profile family independence") {
  const Trajectory tr = std_static();
  const SpectralControl ctl = test_spectral_control(4);
  const CutoffFunction a = make_cutoff(tr, 5.0, 3);
  const CutoffFunction b = make_cutoff(tr, 5.0, 4);
  const double ea = energy_spectral(tr, a, 0.0, ctl).E_em;
  const double eb = energy_spectral(tr, b, 0.0, ctl).E_em;
  CHECK(rel(ea, eb) < 1e-4);
}

TEST_CASE("spectral energy: free particle radiates nothing after subtraction") {
  const Trajectory tr = free_static();
  SpectralControl ctl = test_spectral_control(1);
  ctl.n_theta = 32;
  ctl.amplitude.support_nodes = 256;
  ctl.tail_rel_tol = 1e-7;  // the pure-ramp spectrum collapses quickly
  const CutoffFunction chi = make_cutoff(tr, 4.0);
  const SpectralResult res = energy_spectral(tr, chi, 0.0, ctl);
  CHECK(std::abs(res.artifact) > 0.0);
  CHECK(rel(res.E_raw, res.artifact) < 1e-6);
  CHECK(std::abs(res.E_em) < 1e-3 * std::abs(res.artifact));

  // Worker count must not change the assembled numbers at all.
  SpectralControl ctl4 = ctl;
  ctl4.workers = 4;
  const SpectralResult res4 = energy_spectral(tr, chi, 0.0, ctl4);
  CHECK(res4.E_raw == res.E_raw);
  CHECK(res4.E_em == res.E_em);
}

TEST_CASE("spectral energy: grid export and failure modes") {
  const Trajectory tr = std_static();
  SpectralControl ctl = test_spectral_control(1);
  ctl.n_theta = 16;
  ctl.nodes_per_panel = 12;
  ctl.amplitude.support_nodes = 256;
  ctl.amplitude.ramp_nodes = 128;
  ctl.tail_rel_tol = 1e-3;
  const CutoffFunction chi = make_cutoff(tr, 3.0);

  SpectrumGrid grid;
  const SpectralResult res = energy_spectral(tr, chi, 0.0, ctl, &grid);
  REQUIRE(grid.k.size() > 0);
  REQUIRE(grid.cos_theta.size() == 16);
  CHECK(grid.amplitude.size() == grid.k.size() * grid.cos_theta.size());
  CHECK(grid.dE_dk_dcos.size() == grid.amplitude.size());
  for (std::size_t i = 1; i < grid.k.size(); ++i) CHECK(grid.k[i] > grid.k[i - 1]);
  CHECK(grid.k.back() <= res.k_used);

  // Reassembling the integral from the exported density reproduces E_raw.
  // (Weights are per-node Gauss weights; k panels are uniform width.)
  double sum = 0.0;
  const int nper = ctl.nodes_per_panel;
  const GaussLegendre glk(nper);
  for (std::size_t ik = 0; ik < grid.k.size(); ++ik) {
    const double wk = 0.5 * ctl.k_panel_width * glk.w[ik % nper];
    for (std::size_t ic = 0; ic < grid.cos_theta.size(); ++ic)
      sum += wk * grid.cos_theta_weight[ic] *
             grid.dE_dk_dcos[grid.index(ik, ic)];
  }
  CHECK(rel(sum, res.E_raw) < 1e-12);

  // A k cap below the convergence point must be reported, not absorbed.
  CHECK_THROWS_AS(energy_spectral(tr, chi, 2.0, ctl), TailError);
  SpectralControl starved = ctl;
  starved.max_panels = 2;
  CHECK_THROWS_AS(energy_spectral(tr, chi, 0.0, starved), TailError);
  SpectralControl bad = ctl;
  bad.n_theta = 2;
  CHECK_THROWS_AS(energy_spectral(tr, chi, 0.0, bad), DomainError);
}
