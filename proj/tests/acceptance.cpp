// Acceptance gate: nine pinned criteria, one PASS/FAIL line each.
// Exit status 0 iff all pass.  Tolerances are fixed here, in code.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <radshift/classical_shift.hpp>
#include <radshift/emission.hpp>
#include <radshift/errors.hpp>
#include <radshift/jacobi.hpp>
#include <radshift/quantum_shift.hpp>
#include <radshift/trajectory.hpp>
#include <radshift/wkb.hpp>

using namespace radshift;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr int kWorkers = 4;

ParticleParams std_params() {
  ParticleParams pp;
  pp.m = 1.0;
  pp.alpha_c = 1e-3;
  return pp;
}

StaticPotentialSpec static_spec(double V0) {
  StaticPotentialSpec spec;
  spec.V0 = V0;
  spec.Z1 = 2.0;
  spec.Z2 = 1.0;
  spec.smoothness_order = 3;
  return spec;
}

TimePotentialSpec time_spec(double V0, double t_a, double t_b) {
  TimePotentialSpec spec;
  spec.V0 = V0;
  spec.t_a = t_a;
  spec.t_b = t_b;
  spec.smoothness_order = 3;
  return spec;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double crel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

struct Gate {
  int failures = 0;
  int index = 0;

  void run(const std::string& label, const std::function<std::string()>& body) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = body();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    if (!ok || detail.rfind("FAIL", 0) == 0) {
      ok = false;
      ++failures;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%d/9] %s  %s: %s  (%.1f s)\n", index, ok ? "PASS" : "FAIL",
                label.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
  }
};

std::string pass(double worst, double tol) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s (worst %.3e, tol %.1e)",
                worst <= tol ? "ok" : "FAIL", worst, tol);
  return (worst <= tol ? std::string() : std::string("FAIL ")) +
         std::string(buf);
}

}  // namespace

int main() {
  Gate gate;

  // 1. Static central equivalence: xi-route quantum shift vs classical
  //    radiation-reaction shift over a 5-point (V0, p) sweep.
  gate.run("central equivalence, static xi-route", [&]() {
    const double V0s[] = {0.1, 0.2, 0.3, 0.4, 0.5};
    const double ps[] = {1.2, 1.65, 2.1, 2.55, 3.0};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Trajectory tr =
          integrate_trajectory(std_params(), static_spec(V0s[i]), ps[i]);
      Q1XiControl ctl;
      ctl.workers = kWorkers;
      const Q1XiResult q = delta_z_q1_xi(tr, make_cutoff(tr, 4.0), ctl);
      worst = std::max(worst, rel(q.value, delta_z_LD_direct(tr)));
    }
    return pass(worst, 1e-4);
  });

  // 2. Time-dependent central equivalence, closed-form route.
  gate.run("central equivalence, time-dependent", [&]() {
    const TimePotentialSpec specs[] = {time_spec(0.3, -3.0, -1.0),
                                       time_spec(0.15, -4.0, -1.5),
                                       time_spec(0.45, -2.5, -0.8)};
    const double ps[] = {1.5, 1.2, 2.0};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Trajectory tr = integrate_trajectory(std_params(), specs[i], ps[i]);
      const double q1 = delta_z_q1_closed(tr);
      worst = std::max(worst, rel(q1, delta_z_class_tdep(tr)));
      // Independent oracle: the response integrated as a Jacobi field.
      worst = std::max(worst, rel(q1, delta_z_green(tr)));
    }
    return pass(worst, 1e-4);
  });

  // 3. Recoil term equals the classical packet-offset correction.
  gate.run("recoil vs packet-offset correction", [&]() {
    const Trajectory tr =
        integrate_trajectory(std_params(), static_spec(0.3), 1.5);
    const double E = emitted_energy_larmor(tr);
    double worst = 0.0;
    for (double z0 : {-0.5, 0.1, 1.0})
      worst = std::max(worst, rel(delta_z_q2(tr, z0, E), delta_z_extra(tr, z0)));
    const Trajectory tt =
        integrate_trajectory(std_params(), time_spec(0.3, -3.0, -1.0), 1.5);
    if (delta_z_q2(tt, 1.0, emitted_energy_larmor(tt)) != 0.0)
      return std::string("FAIL time-dependent recoil not exactly 0");
    if (delta_z_extra(tt, 1.0) != 0.0)
      return std::string("FAIL time-dependent offset not exactly 0");
    return pass(worst, 1e-6);
  });

  // 4. Spectral energy vs time-domain Larmor, with window-artifact control.
  gate.run("spectral vs time-domain energy", [&]() {
    const Trajectory tr =
        integrate_trajectory(std_params(), static_spec(0.3), 1.5);
    SpectralControl ctl;
    ctl.workers = kWorkers;
    const ExtrapolatedSpectral ex = extrapolate_spectral_energy(tr, 5.0, 0.0, ctl);
    const double larmor = energy_time_domain(tr);
    const double dev_larmor = rel(ex.E_extr, larmor);
    const double dev_routes = rel(ex.at_w.E_em, ex.E_extr);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "extrapolated vs Larmor %.3e (tol 1e-3); "
                  "subtracted vs extrapolated %.3e (tol 1e-4)",
                  dev_larmor, dev_routes);
    if (dev_larmor > 1e-3 || dev_routes > 1e-4)
      return std::string("FAIL ") + buf;
    return std::string(buf);
  });

  // 5. Solid-angle identities.
  gate.run("solid-angle identities", [&]() {
    double worst = 0.0;
    for (double v : {0.0, 0.5, 0.9}) {
      worst = std::max(worst, rel(solid_angle_dtau_sq(v), 4.0 * kPi));
      const double g2 = 1.0 / (1.0 - v * v);
      worst = std::max(worst,
                       rel(angular_kernel_sin2(v), (8.0 * kPi / 3.0) * g2 * g2));
      const double closed5 = (8.0 * kPi / 3.0) * g2 * g2 * g2 * v;
      const double k5 = angular_kernel_sin2_cos(v);
      worst = std::max(worst, v == 0.0
                                  ? std::abs(k5) / (8.0 * kPi / 3.0)
                                  : rel(k5, closed5));
    }
    return pass(worst, 1e-10);
  });

  // 6. Symplectic structure of the linearized dynamics.
  gate.run("symplectic product and reciprocity", [&]() {
    const Trajectory tr =
        integrate_trajectory(std_params(), static_spec(0.3), 1.5);
    const double lo = tr.t_min() + 0.5;
    std::vector<double> nodes(10);
    for (int i = 0; i < 10; ++i) nodes[i] = lo + (-0.1 - lo) * i / 9.0;

    std::vector<JacobiField> fields;
    fields.reserve(nodes.size());
    for (double s : nodes) fields.push_back(jacobi_field(tr, s));

    double worst_drift = 0.0;
    {
      const JacobiField& f1 = fields[2];
      const JacobiField& f2 = fields[7];
      const double base = symplectic_product(f1, f2, -0.1);
      for (double t : nodes)
        worst_drift = std::max(
            worst_drift, std::abs(symplectic_product(f1, f2, t) - base) /
                             std::max(std::abs(base), 1e-300));
    }
    double worst_rec = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double a = fields[i].Dz(nodes[j]);
        const double b = fields[j].Dz(nodes[i]);
        worst_rec = std::max(worst_rec,
                             std::abs(a + b) /
                                 std::max({std::abs(a), std::abs(b), 1e-12}));
      }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "drift %.3e (tol 1e-8); reciprocity %.3e (tol 1e-6)",
                  worst_drift, worst_rec);
    if (worst_drift > 1e-8 || worst_rec > 1e-6)
      return std::string("FAIL ") + buf;
    return std::string(buf);
  });

  // 7. Finite-hbar amplitudes converge at first order to the classical ones.
  gate.run("hbar -> 0 amplitude limit", [&]() {
    double worst_dev = 0.0, worst_order = 0.0;
    const auto probe = [&](const Trajectory& tr, double k, double theta) {
      const CutoffFunction chi = make_cutoff(tr, 4.0);
      const HbarConvergence hc = hbar_convergence(tr, k, theta, chi);
      const AmplitudePair ref =
          emission_amplitude(tr, k, theta, chi, AmplitudeForm::velocity);
      worst_dev = std::max({worst_dev, crel(hc.richardson.A_t, ref.A_t),
                            crel(hc.richardson.A_z, ref.A_z)});
      for (double ord : {hc.order_t, hc.order_z})
        worst_order = std::max(worst_order, std::abs(ord - 1.0));
    };
    const Trajectory ts =
        integrate_trajectory(std_params(), static_spec(0.3), 1.5);
    probe(ts, 2.0, kPi / 3.0);
    probe(ts, 1.2, 1.9);
    probe(ts, 3.0, 0.8);
    const Trajectory tt =
        integrate_trajectory(std_params(), time_spec(0.3, -3.0, -1.0), 1.5);
    probe(tt, 1.5, 1.0);
    probe(tt, 2.0, 2.2);
    probe(tt, 0.8, 0.5);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "limit dev %.3e (tol 1e-4); order fit 1 +/- %.2f (cap 0.2)",
                  worst_dev, worst_order);
    if (worst_dev > 1e-4 || worst_order > 0.2)
      return std::string("FAIL ") + buf;
    return std::string(buf);
  });

  // 8. Quadrature hygiene: amplitude-form equality and window cross-term.
  gate.run("amplitude forms and window cross-term", [&]() {
    const Trajectory tr =
        integrate_trajectory(std_params(), static_spec(0.3), 1.5);
    const Trajectory tt =
        integrate_trajectory(std_params(), time_spec(0.3, -3.0, -1.0), 1.5);
    double worst_form = 0.0;
    const auto cmp = [&](const Trajectory& t, double k, double theta) {
      const CutoffFunction chi = make_cutoff(t, 4.0);
      const AmplitudePair a =
          emission_amplitude(t, k, theta, chi, AmplitudeForm::velocity);
      const AmplitudePair b =
          emission_amplitude(t, k, theta, chi, AmplitudeForm::ibp);
      worst_form = std::max({worst_form, crel(a.A_t, b.A_t), crel(a.A_z, b.A_z)});
    };
    cmp(tr, 0.8, 0.9);
    cmp(tr, 2.0, kPi / 3.0);
    cmp(tr, 3.1, 2.2);
    cmp(tt, 1.5, 1.0);

    const CutoffFunction probe = make_cutoff(tr, 1.0);
    const double support = probe.xi_b() - probe.xi_a();
    double worst_cross = 0.0;
    for (double mult : {2.0, 4.0, 8.0}) {
      Q1XiControl ctl;
      ctl.workers = kWorkers;
      const Q1XiResult q =
          delta_z_q1_xi(tr, make_cutoff(tr, mult * support), ctl);
      worst_cross =
          std::max(worst_cross, std::abs(q.cross_term) / std::abs(q.value));
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "form dev %.3e (tol 1e-8); cross-term %.3e (tol 1e-8)",
                  worst_form, worst_cross);
    if (worst_form > 1e-8 || worst_cross > 1e-8)
      return std::string("FAIL ") + buf;
    return std::string(buf);
  });

  // 9. Coupling linearity and grid-refinement order.
  gate.run("alpha_c linearity and grid order", [&]() {
    ParticleParams p1 = std_params();
    ParticleParams p2 = std_params();
    p2.alpha_c = 2.0 * p1.alpha_c;
    const StaticPotentialSpec spec = static_spec(0.3);
    const Trajectory t1 = integrate_trajectory(p1, spec, 1.5);
    const Trajectory t2 = integrate_trajectory(p2, spec, 1.5);
    double worst_lin = 0.0;
    const auto lin = [&](double a, double b) {
      worst_lin = std::max(worst_lin, rel(2.0 * a, b));
    };
    lin(delta_z_LD_direct(t1), delta_z_LD_direct(t2));
    lin(delta_z_q1_closed(t1), delta_z_q1_closed(t2));
    lin(delta_z_q1_t(t1), delta_z_q1_t(t2));
    lin(emitted_energy_larmor(t1), emitted_energy_larmor(t2));
    lin(energy_time_domain(t1), energy_time_domain(t2));
    lin(delta_z_q2(t1, 0.1, emitted_energy_larmor(t1)),
        delta_z_q2(t2, 0.1, emitted_energy_larmor(t2)));
    {
      SpectralControl sctl;
      sctl.workers = kWorkers;
      sctl.n_theta = 32;
      sctl.tail_rel_tol = 1e-4;
      sctl.amplitude.support_nodes = 512;
      const CutoffFunction chi1 = make_cutoff(t1, 4.0);
      const CutoffFunction chi2 = make_cutoff(t2, 4.0);
      lin(energy_spectral(t1, chi1, 0.0, sctl).E_em,
          energy_spectral(t2, chi2, 0.0, sctl).E_em);
    }

    // Grid order: the stored-grid cumulative carries the O(h^4) term; sweep
    // the density downward so it dominates the integrator tolerance floor.
    GridControl ref_ctl;
    ref_ctl.density = 8.0;
    const double ref =
        delta_z_LD_direct(integrate_trajectory(p1, spec, 1.5, ref_ctl));
    double errs[3];
    const double dens[3] = {0.5, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
      GridControl g;
      g.density = dens[i];
      errs[i] = std::abs(
          delta_z_LD_direct(integrate_trajectory(p1, spec, 1.5, g)) - ref);
    }
    // Least-squares slope of log2(err) against refinement level.
    const double order =
        0.5 * (std::log2(errs[0] / errs[1]) + std::log2(errs[1] / errs[2]));
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "linearity dev %.3e (tol 1e-12); grid order %.2f (min 4)",
                  worst_lin, order);
    if (worst_lin > 1e-12 || order < 4.0)
      return std::string("FAIL ") + buf;
    return std::string(buf);
  });

  if (gate.failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", gate.failures);
  return 1;
}
