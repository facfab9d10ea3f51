#include "radshift/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "radshift/quadrature.hpp"

namespace radshift {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kPi = 3.141592653589793238462643383279502884;

double mode_energy(const ParticleParams& params, double p) {
  validate(params);
  if (!(p > 0.0)) throw DomainError("mode momentum must be positive");
  return std::hypot(p, params.m);
}

// kappa^2 = (w - m)(w + m) with w = p0 - V; factored form keeps the
// near-threshold cancellation benign.
double kappa_from_energy(double w, double m) {
  const double rad = (w - m) * (w + m);
  if (!(rad > 0.0))
    throw TurningPointError(
        "local WKB momentum vanishes: classically forbidden point reached");
  return std::sqrt(rad);
}

// Largest V on the closed interval covered by a monotone plateau profile.
double profile_max(double V0) { return std::max(V0, 0.0); }

struct SegmentCuts {
  std::vector<double> cuts;
  void add(double x, double lo, double hi) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
};

// chi's plateau must cover the image of the acceleration interval, same
// contract as the classical spectrum.
void require_coverage(const Trajectory& tr, const XiFrame& fr,
                      const CutoffFunction& chi) {
  const double xa = fr.xi_of_t(tr.t_acc_begin());
  const double xb = fr.xi_of_t(tr.t_acc_end());
  const double lo = std::min(xa, xb), hi = std::max(xa, xb);
  const double slack = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
  if (chi.xi_a() > lo + slack || chi.xi_b() < hi - slack)
    throw CutoffCoverageError(
        "cutoff plateau does not cover the accelerated interval for this "
        "direction");
}

template <class F>
std::complex<double> integrate_segments(const F& f, std::vector<double> cuts,
                                        double rel_tol) {
  std::sort(cuts.begin(), cuts.end());
  QuadratureControl qc;
  qc.rel_tol = rel_tol;
  qc.initial_intervals = 4;
  std::complex<double> total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    total += integrate_adaptive(f, cuts[i], cuts[i + 1], qc).value;
  }
  return total;
}

double fit_order(double d01, double d12, double ratio) {
  if (!(d01 > 0.0) || !(d12 > 0.0)) return 0.0;
  return std::log(d01 / d12) / std::log(ratio);
}

}  // namespace

// ---------------------------------------------------------------------------
// Local momenta

double kappa(const StaticPotentialSpec& spec, const ParticleParams& params,
             double p, double z) {
  validate(spec);
  const double p0 = mode_energy(params, p);
  return kappa_from_energy(p0 - eval_static(spec, z).V, params.m);
}

double wkb_validity(const StaticPotentialSpec& spec,
                    const ParticleParams& params, double p) {
  validate(spec);
  const double p0 = mode_energy(params, p);
  const StaticPotential pot(spec);
  // |d(1/kappa)/dz| = |(p0 - V) V'| / kappa^3, supported on the ramp only.
  const auto deriv_mag = [&](double z) {
    const PotentialValue pv = pot(z);
    const double kap = kappa_from_energy(p0 - pv.V, params.m);
    return std::abs((p0 - pv.V) * pv.d1) / (kap * kap * kap);
  };
  const double a = -spec.Z1, b = -spec.Z2;
  const int n = 4096;
  const double h = (b - a) / n;
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    const double v = deriv_mag(a + i * h);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  // Golden-section refinement of the peak within the bracketing cell pair.
  double lo = a + std::max(0, best_i - 1) * h;
  double hi = a + std::min(n, best_i + 1) * h;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = deriv_mag(x1), f2 = deriv_mag(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = deriv_mag(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = deriv_mag(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

double phase_integral(const StaticPotentialSpec& spec,
                      const ParticleParams& params, double p, double z) {
  validate(spec);
  if (z == 0.0) return 0.0;
  const double p0 = mode_energy(params, p);
  const StaticPotential pot(spec);
  const auto kap = [&](double s) {
    return kappa_from_energy(p0 - pot(s).V, params.m);
  };
  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  qc.initial_intervals = 4;
  return integrate_adaptive(kap, 0.0, z, qc).value;
}

// ---------------------------------------------------------------------------
// Mode bundles

WkbModeStatic wkb_mode_static(const StaticPotentialSpec& spec,
                              const ParticleParams& params, double p,
                              double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  WkbModeStatic mode;
  mode.spec = spec;
  mode.params = params;
  mode.p = p;
  mode.p0 = mode_energy(params, p);
  mode.hbar = hbar;
  // Fail fast if the mode is classically forbidden anywhere on the profile.
  kappa(spec, params, p, -spec.Z1 - 1.0);
  kappa(spec, params, p, 0.0);
  return mode;
}

double WkbModeStatic::kappa_at(double z) const {
  return radshift::kappa(spec, params, p, z);
}

double WkbModeStatic::phase(double z) const {
  return phase_integral(spec, params, p, z);
}

std::complex<double> WkbModeStatic::phi(double z) const {
  const double kap = kappa_at(z);
  return std::sqrt(p / kap) * std::exp(kI * (phase(z) / hbar));
}

WkbModeTime wkb_mode_time(const TimePotentialSpec& spec,
                          const ParticleParams& params, double p_canonical,
                          double hbar) {
  validate(spec);
  validate(params);
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  WkbModeTime mode;
  mode.spec = spec;
  mode.params = params;
  mode.p = p_canonical;
  mode.hbar = hbar;
  mode.p0 = mode.sigma(0.0);
  return mode;
}

double WkbModeTime::sigma(double t) const {
  return std::hypot(p - eval_time(spec, t).V, params.m);
}

double WkbModeTime::phase(double t) const {
  if (t == 0.0) return 0.0;
  const TimePotential pot(spec);
  const auto sig = [&](double s) { return std::hypot(p - pot(s).V, params.m); };
  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  qc.initial_intervals = 4;
  return integrate_adaptive(sig, 0.0, t, qc).value;
}

std::complex<double> WkbModeTime::phi_t(double t) const {
  return std::sqrt(p0 / sigma(t)) * std::exp(-kI * (phase(t) / hbar));
}

// ---------------------------------------------------------------------------
// Mode pairs

WkbPairStatic wkb_pair_static(const Trajectory& traj, double k, double hbar) {
  if (traj.kind() != PotentialKind::static_z)
    throw DomainError("static mode pair needs a static-potential trajectory");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const double m = traj.particle().m;
  WkbPairStatic pair;
  pair.p = traj.p_final();
  pair.p0 = traj.p0();
  pair.P0 = pair.p0 - hbar * k;
  const double vmax = profile_max(traj.static_spec().V0);
  if (!(pair.P0 - vmax > m))
    throw KinematicsError(
        "emitted energy leaves the partner mode below threshold on the "
        "potential profile");
  pair.P = std::sqrt((pair.P0 - m) * (pair.P0 + m));
  return pair;
}

WkbPairTime wkb_pair_time(const Trajectory& traj, double k, double theta,
                          double hbar) {
  if (traj.kind() != PotentialKind::time_t)
    throw DomainError("time mode pair needs a time-potential trajectory");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  WkbPairTime pair;
  pair.p = traj.conserved();
  pair.p0 = traj.p0();
  pair.P = pair.p - hbar * k * std::cos(theta);
  pair.P0 = std::hypot(pair.P - traj.time_spec().V0, traj.particle().m);
  return pair;
}

// ---------------------------------------------------------------------------
// Direct amplitudes

namespace {

// Cumulative phase table for the static product: the full phase is
//   Phi(t) = int_0^{z(t)} (kappa_p - kappa_P)/hbar dz' - k cos(theta) z(t),
// with the quotient form (kappa_p - kappa_P)/hbar
//   q(z) = k (p0 + P0 - 2V) / (kappa_p + kappa_P)
// exactly free of hbar cancellation.  Everything is marched in t along the
// classical trajectory (dz = zdot dt), anchored at t = 0 where z = 0.
struct StaticPhaseTable {
  CumulativeIntegral cum;
  double offset = 0.0;
  double operator()(double t) const { return cum(t) - offset; }
};

StaticPhaseTable build_static_phase(const Trajectory& tr,
                                    const WkbPairStatic& pair, double k,
                                    double cos_theta, double t_lo, double t_hi,
                                    int nodes) {
  const double m = tr.particle().m;
  const double lo = std::min(t_lo, 0.0), hi = std::max(t_hi, 0.0);
  const int n = std::max(nodes, 64);
  std::vector<double> ts(n + 1), f(n + 1), fp(n + 1);
  const double h = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) {
    const double t = (i == n) ? hi : lo + i * h;
    const TrajectorySample s = tr.eval(t);
    const PotentialValue pv = tr.potential_at(t);
    const double kp = kappa_from_energy(pair.p0 - pv.V, m);
    const double kP = kappa_from_energy(pair.P0 - pv.V, m);
    const double sum = kp + kP;
    const double q = k * (pair.p0 + pair.P0 - 2.0 * pv.V) / sum;
    const double kp_d = -(pair.p0 - pv.V) * pv.d1 / kp;
    const double kP_d = -(pair.P0 - pv.V) * pv.d1 / kP;
    const double q_d =
        k * (-2.0 * pv.d1 * sum - (pair.p0 + pair.P0 - 2.0 * pv.V) *
                                      (kp_d + kP_d)) /
        (sum * sum);
    ts[i] = t;
    f[i] = s.zdot * (q - k * cos_theta);
    fp[i] = s.zddot * (q - k * cos_theta) + s.zdot * s.zdot * q_d;
  }
  StaticPhaseTable table;
  table.cum = CumulativeIntegral(std::move(ts), std::move(f), std::move(fp));
  table.offset = table.cum(0.0);
  return table;
}

// Time-dependent mirror: Phi(t) = k t - int_0^t q with
//   q(t) = (sigma_p - sigma_P)/hbar
//        = k cos(theta) (p + P - 2V) / (sigma_p + sigma_P).
struct TimePhaseTable {
  CumulativeIntegral cum;
  double offset = 0.0;
  double k = 0.0;
  double operator()(double t) const { return k * t - (cum(t) - offset); }
};

TimePhaseTable build_time_phase(const Trajectory& tr, const WkbPairTime& pair,
                                double k, double cos_theta, double t_lo,
                                double t_hi, int nodes) {
  const double m = tr.particle().m;
  const double kz = k * cos_theta;
  const double lo = std::min(t_lo, 0.0), hi = std::max(t_hi, 0.0);
  const int n = std::max(nodes, 64);
  std::vector<double> ts(n + 1), f(n + 1), fp(n + 1);
  const double h = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) {
    const double t = (i == n) ? hi : lo + i * h;
    const PotentialValue pv = tr.potential_at(t);
    const double sp = std::hypot(pair.p - pv.V, m);
    const double sP = std::hypot(pair.P - pv.V, m);
    const double sum = sp + sP;
    const double q = kz * (pair.p + pair.P - 2.0 * pv.V) / sum;
    const double sp_d = -(pair.p - pv.V) * pv.d1 / sp;
    const double sP_d = -(pair.P - pv.V) * pv.d1 / sP;
    const double q_d =
        kz * (-2.0 * pv.d1 * sum - (pair.p + pair.P - 2.0 * pv.V) *
                                       (sp_d + sP_d)) /
        (sum * sum);
    ts[i] = t;
    f[i] = q;
    fp[i] = q_d;
  }
  TimePhaseTable table;
  table.k = k;
  table.cum = CumulativeIntegral(std::move(ts), std::move(f), std::move(fp));
  table.offset = table.cum(0.0);
  return table;
}

}  // namespace

AmplitudePair amplitude_direct_static(const Trajectory& traj, double k,
                                      double theta, double hbar,
                                      const CutoffFunction& chi,
                                      const WkbAmplitudeControl& ctl) {
  const WkbPairStatic pair = wkb_pair_static(traj, k, hbar);
  const double m = traj.particle().m;
  const double c = std::cos(theta);
  const XiFrame fr(traj, theta);
  require_coverage(traj, fr, chi);
  const double t_lo = fr.t_of_xi(chi.lo());
  const double t_hi = fr.t_of_xi(chi.hi());

  const StaticPhaseTable phase =
      build_static_phase(traj, pair, k, c, t_lo, t_hi, ctl.phase_nodes);
  const double e = std::sqrt(4.0 * kPi * traj.particle().alpha_c);

  const auto integrand_t = [&](double t) {
    const TrajectorySample s = traj.eval(t);
    const PotentialValue pv = traj.potential_at(t);
    const double kp = kappa_from_energy(pair.p0 - pv.V, m);
    const double kP = kappa_from_energy(pair.P0 - pv.V, m);
    const double pi_fac = std::sqrt(pair.p * pair.P / (kp * kP));
    const double w = chi.chi(s.t - s.z * c);
    return ((pair.p0 - pv.V) / pair.p) * pi_fac * w * s.zdot *
           std::exp(kI * phase(t));
  };
  const auto integrand_z = [&](double t) {
    const TrajectorySample s = traj.eval(t);
    const PotentialValue pv = traj.potential_at(t);
    const double kp = kappa_from_energy(pair.p0 - pv.V, m);
    const double kP = kappa_from_energy(pair.P0 - pv.V, m);
    const double kp_d = -(pair.p0 - pv.V) * pv.d1 / kp;
    const double kP_d = -(pair.P0 - pv.V) * pv.d1 / kP;
    const double pi_fac = std::sqrt(pair.p * pair.P / (kp * kP));
    const double w = chi.chi(s.t - s.z * c);
    const std::complex<double> bracket =
        (kp + kP) / (2.0 * pair.p) -
        kI * (hbar / (2.0 * pair.p)) *
            (kP_d / (2.0 * kP) - kp_d / (2.0 * kp));
    return bracket * pi_fac * w * s.zdot * std::exp(kI * phase(t));
  };

  SegmentCuts sc;
  sc.cuts = {t_lo, t_hi};
  sc.add(fr.t_of_xi(chi.xi_a()), t_lo, t_hi);
  sc.add(traj.t_acc_begin(), t_lo, t_hi);
  sc.add(traj.t_acc_end(), t_lo, t_hi);
  sc.add(fr.t_of_xi(chi.xi_b()), t_lo, t_hi);

  AmplitudePair amp;
  amp.A_t = -e * integrate_segments(integrand_t, sc.cuts, ctl.rel_tol);
  amp.A_z = e * integrate_segments(integrand_z, sc.cuts, ctl.rel_tol);
  return amp;
}

AmplitudePair amplitude_direct_time(const Trajectory& traj, double k,
                                    double theta, double hbar,
                                    const CutoffFunction& chi,
                                    const WkbAmplitudeControl& ctl) {
  const WkbPairTime pair = wkb_pair_time(traj, k, theta, hbar);
  const double m = traj.particle().m;
  const double c = std::cos(theta);
  const XiFrame fr(traj, theta);
  require_coverage(traj, fr, chi);
  const double t_lo = fr.t_of_xi(chi.lo());
  const double t_hi = fr.t_of_xi(chi.hi());

  const TimePhaseTable phase =
      build_time_phase(traj, pair, k, c, t_lo, t_hi, ctl.phase_nodes);
  const double e = std::sqrt(4.0 * kPi * traj.particle().alpha_c);

  const auto integrand_z = [&](double t) {
    const TrajectorySample s = traj.eval(t);
    const PotentialValue pv = traj.potential_at(t);
    const double sp = std::hypot(pair.p - pv.V, m);
    const double sP = std::hypot(pair.P - pv.V, m);
    const double pi_fac = std::sqrt(pair.p0 * pair.P0 / (sp * sP));
    const double w = chi.chi(s.t - s.z * c);
    return ((pair.p - pv.V) / pair.p0) * pi_fac * w * std::exp(kI * phase(t));
  };
  const auto integrand_t = [&](double t) {
    const TrajectorySample s = traj.eval(t);
    const PotentialValue pv = traj.potential_at(t);
    const double sp = std::hypot(pair.p - pv.V, m);
    const double sP = std::hypot(pair.P - pv.V, m);
    const double sp_d = -(pair.p - pv.V) * pv.d1 / sp;
    const double sP_d = -(pair.P - pv.V) * pv.d1 / sP;
    const double pi_fac = std::sqrt(pair.p0 * pair.P0 / (sp * sP));
    const double w = chi.chi(s.t - s.z * c);
    const std::complex<double> bracket =
        (sp + sP) / (2.0 * pair.p0) +
        kI * (hbar / (2.0 * pair.p0)) *
            (sP_d / (2.0 * sP) - sp_d / (2.0 * sp));
    return bracket * pi_fac * w * std::exp(kI * phase(t));
  };

  SegmentCuts sc;
  sc.cuts = {t_lo, t_hi};
  sc.add(fr.t_of_xi(chi.xi_a()), t_lo, t_hi);
  sc.add(traj.t_acc_begin(), t_lo, t_hi);
  sc.add(traj.t_acc_end(), t_lo, t_hi);
  sc.add(fr.t_of_xi(chi.xi_b()), t_lo, t_hi);

  AmplitudePair amp;
  amp.A_t = -e * integrate_segments(integrand_t, sc.cuts, ctl.rel_tol);
  amp.A_z = e * integrate_segments(integrand_z, sc.cuts, ctl.rel_tol);
  return amp;
}

AmplitudePair amplitude_direct(const Trajectory& traj, double k, double theta,
                               double hbar, const CutoffFunction& chi,
                               const WkbAmplitudeControl& ctl) {
  return traj.kind() == PotentialKind::static_z
             ? amplitude_direct_static(traj, k, theta, hbar, chi, ctl)
             : amplitude_direct_time(traj, k, theta, hbar, chi, ctl);
}

// ---------------------------------------------------------------------------
// Convergence study

HbarConvergence hbar_convergence(const Trajectory& traj, double k,
                                 double theta, const CutoffFunction& chi,
                                 std::vector<double> hbars,
                                 const WkbAmplitudeControl& ctl) {
  if (hbars.size() < 3)
    throw DomainError("hbar sequence needs at least three values");
  for (std::size_t i = 0; i + 1 < hbars.size(); ++i)
    if (!(hbars[i] > hbars[i + 1] && hbars[i + 1] > 0.0))
      throw DomainError("hbar sequence must be positive and decreasing");
  const double ratio = hbars[0] / hbars[1];
  for (std::size_t i = 1; i + 1 < hbars.size(); ++i)
    if (std::abs(hbars[i] / hbars[i + 1] / ratio - 1.0) > 1e-8)
      throw DomainError("hbar sequence must use a uniform ratio");

  HbarConvergence out;
  out.hbars = std::move(hbars);
  out.amplitudes.reserve(out.hbars.size());
  for (double h : out.hbars)
    out.amplitudes.push_back(amplitude_direct(traj, k, theta, h, chi, ctl));

  const std::size_t n = out.amplitudes.size();
  const AmplitudePair& a0 = out.amplitudes[n - 3];
  const AmplitudePair& a1 = out.amplitudes[n - 2];
  const AmplitudePair& a2 = out.amplitudes[n - 1];
  out.order_t = fit_order(std::abs(a0.A_t - a1.A_t), std::abs(a1.A_t - a2.A_t),
                          ratio);
  out.order_z = fit_order(std::abs(a0.A_z - a1.A_z), std::abs(a1.A_z - a2.A_z),
                          ratio);
  out.richardson.A_t = (ratio * a2.A_t - a1.A_t) / (ratio - 1.0);
  out.richardson.A_z = (ratio * a2.A_z - a1.A_z) / (ratio - 1.0);
  return out;
}

}  // namespace radshift
