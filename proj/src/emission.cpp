#include "radshift/emission.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <vector>

#include "radshift/errors.hpp"
#include "radshift/filon.hpp"
#include "radshift/quadrature.hpp"

namespace radshift {

namespace {

int profile_order_for(int smoothness_order) {
  if (smoothness_order < 2)
    throw DomainError("cutoff smoothness_order must be at least 2");
  return 2 * smoothness_order + 1;
}

constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace

CutoffFunction::CutoffFunction(double xi_a, double xi_b, double width,
                               int smoothness_order)
    : xi_a_(xi_a),
      xi_b_(xi_b),
      width_(width),
      order_(smoothness_order),
      rise_(profile_order_for(smoothness_order), xi_a - width, xi_a),
      fall_(profile_order_for(smoothness_order), xi_b, xi_b + width) {
  if (!(width > 0.0)) throw DomainError("cutoff ramp width must be positive");
  if (!(xi_b >= xi_a))
    throw DomainError("cutoff plateau must satisfy xi_a <= xi_b");
}

// rise - fall is exactly 0 left of the window, exactly 1 on the plateau and
// exactly 0 again on the right, because the two step supports are disjoint.
double CutoffFunction::chi(double xi) const {
  return rise_.value(xi) - fall_.value(xi);
}

double CutoffFunction::chi_prime(double xi) const {
  return rise_.deriv1(xi) - fall_.deriv1(xi);
}

double CutoffFunction::chi_second(double xi) const {
  return rise_.deriv2(xi) - fall_.deriv2(xi);
}

double CutoffFunction::c_profile() const {
  return 2.0 * rise_.unit_slope_sq_integral();
}

double CutoffFunction::slope_sq_integral() const {
  return c_profile() / width_;
}

CutoffFunction make_cutoff(const Trajectory& traj, double width,
                           int smoothness_order) {
  const double ta = traj.t_acc_begin();
  const double tb = traj.t_acc_end();
  const double za = traj.eval(ta).z;
  const double zb = traj.eval(tb).z;
  // xi(t; theta) = t - z cos(theta), so over all angles the support image
  // stays inside [ta - |z(ta)|, tb + |z(tb)|].
  return CutoffFunction(ta - std::abs(za), tb + std::abs(zb), width,
                        smoothness_order);
}

XiFrame::XiFrame(const Trajectory& traj, double theta)
    : traj_(&traj), theta_(theta), cos_(std::cos(theta)) {}

double XiFrame::xi_of_t(double t) const {
  return t - traj_->eval(t).z * cos_;
}

double XiFrame::dxi_dt(double t) const {
  return 1.0 - traj_->eval(t).zdot * cos_;
}

double XiFrame::t_of_xi(double xi) const {
  // F(t) = t - z(t) cos - xi is strictly increasing with slope bounded away
  // from zero, so Newton from t = xi converges after a bracket safeguard.
  const double tol = 1e-13 * (1.0 + std::abs(xi));
  double t = xi;
  double f = xi_of_t(t) - xi;
  double lo = t, hi = t, step = 1.0 + 0.25 * std::abs(xi);
  while (f > 0.0 && xi_of_t(lo) - xi > 0.0) lo -= step, step *= 2.0;
  step = 1.0 + 0.25 * std::abs(xi);
  while (f < 0.0 && xi_of_t(hi) - xi < 0.0) hi += step, step *= 2.0;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(f) <= tol) break;
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    double next = t - f / dxi_dt(t);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    t = next;
    f = xi_of_t(t) - xi;
  }
  return t;
}

namespace {

// Everything the amplitude integrands need at one worldline point.
struct FramePoint {
  double dt_dxi, dz_dxi;
  double d2z, d2t, d3z, d3t;
  double dtau;
};

FramePoint frame_point(const TrajectorySample& s, double c) {
  const double u = 1.0 - s.zdot * c;
  const double iu = 1.0 / u;
  FramePoint f;
  f.dt_dxi = iu;
  f.dz_dxi = s.zdot * iu;
  const double iu3 = iu * iu * iu;
  f.d2z = s.zddot * iu3;
  f.d2t = c * f.d2z;
  f.d3z = s.zdddot * iu3 * iu + 3.0 * c * s.zddot * s.zddot * iu3 * iu * iu;
  f.d3t = c * f.d3z;
  f.dtau = iu / s.gamma;
  return f;
}

}  // namespace

XiDerivatives xi_derivatives(const Trajectory& traj, double theta, double t) {
  const double c = std::cos(theta);
  const FramePoint f = frame_point(traj.eval(t), c);
  XiDerivatives d;
  d.d2z_dxi2 = f.d2z;
  d.d2t_dxi2 = f.d2t;
  d.d3z_dxi3 = f.d3z;
  d.d3t_dxi3 = f.d3t;
  d.dtau_dxi = f.dtau;
  d.dxi_dt = 1.0 - traj.eval(t).zdot * c;
  return d;
}

namespace {

struct SupportImage {
  double xs_lo, xs_hi;  // xi-image of [t_acc_begin, t_acc_end] at this angle
};

SupportImage check_coverage(const Trajectory& tr, const XiFrame& fr,
                            const CutoffFunction& chi) {
  SupportImage im;
  im.xs_lo = fr.xi_of_t(tr.t_acc_begin());
  im.xs_hi = fr.xi_of_t(tr.t_acc_end());
  const double slack = 1e-9 * (1.0 + std::abs(im.xs_lo) + std::abs(im.xs_hi));
  if (chi.xi_a() > im.xs_lo + slack || chi.xi_b() < im.xs_hi - slack)
    throw CutoffCoverageError(
        "cutoff plateau does not cover the acceleration support at this "
        "angle");
  im.xs_lo = std::max(im.xs_lo, chi.xi_a());
  im.xs_hi = std::min(im.xs_hi, chi.xi_b());
  return im;
}

// Node table for Filon quadrature of one (trajectory, angle, window, form):
// g and g' are independent of k, so the oscillatory moments are the only
// per-k work.
struct FilonTable {
  std::vector<double> xi, gt, gpt, gz, gpz;
  AmplitudeForm form = AmplitudeForm::ibp;
};

void integrand_values(const Trajectory& tr, double c, double t, double xi,
                      const CutoffFunction& chi, AmplitudeForm form,
                      double* gt, double* gpt, double* gz, double* gpz) {
  const FramePoint f = frame_point(tr.eval(t), c);
  const double cv = chi.chi(xi);
  const double cp = chi.chi_prime(xi);
  if (form == AmplitudeForm::velocity) {
    *gt = f.dt_dxi * cv;
    *gpt = f.d2t * cv + f.dt_dxi * cp;
    *gz = f.dz_dxi * cv;
    *gpz = f.d2z * cv + f.dz_dxi * cp;
  } else {
    const double cs = chi.chi_second(xi);
    *gt = f.d2t * cv + f.dt_dxi * cp;
    *gpt = f.d3t * cv + 2.0 * f.d2t * cp + f.dt_dxi * cs;
    *gz = f.d2z * cv + f.dz_dxi * cp;
    *gpz = f.d3z * cv + 2.0 * f.d2z * cp + f.dz_dxi * cs;
  }
}

FilonTable build_filon_table(const Trajectory& tr, const XiFrame& fr,
                             const CutoffFunction& chi, AmplitudeForm form,
                             const AmplitudeControl& ctl) {
  check_coverage(tr, fr, chi);
  const int nramp = std::max(ctl.ramp_nodes, 8);
  const int nsup = std::max(ctl.support_nodes, 16);

  FilonTable tab;
  tab.form = form;
  tab.xi.reserve(2 * nramp + nsup + 8);

  std::vector<double> ts;
  ts.reserve(tab.xi.capacity());
  const double min_sep = 1e-11 * (1.0 + std::abs(chi.lo()) + std::abs(chi.hi()));
  auto push = [&](double xi, double t) {
    if (!tab.xi.empty() && !(xi > tab.xi.back() + min_sep)) return;
    tab.xi.push_back(xi);
    ts.push_back(t);
  };

  // Rising ramp, resolved uniformly in xi (the trajectory is inertial there).
  for (int i = 0; i <= nramp; ++i) {
    const double xi = chi.lo() + (chi.xi_a() - chi.lo()) * i / nramp;
    push(xi, fr.t_of_xi(xi));
  }
  // Gap between plateau edge and support image: g is constant (velocity
  // form) or zero (ibp form), so the single Hermite interval is exact.
  // Acceleration support, resolved uniformly in t and mapped through xi(t).
  const double ta = tr.t_acc_begin(), tb = tr.t_acc_end();
  if (tb - ta > min_sep) {
    for (int i = 0; i <= nsup; ++i) {
      const double t = ta + (tb - ta) * i / nsup;
      push(fr.xi_of_t(t), t);
    }
  }
  // Gap, then falling ramp.
  for (int i = 0; i <= nramp; ++i) {
    const double xi = chi.xi_b() + (chi.hi() - chi.xi_b()) * i / nramp;
    push(xi, fr.t_of_xi(xi));
  }

  const std::size_t n = tab.xi.size();
  tab.gt.resize(n);
  tab.gpt.resize(n);
  tab.gz.resize(n);
  tab.gpz.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    integrand_values(tr, fr.cos_theta(), ts[i], tab.xi[i], chi, form,
                     &tab.gt[i], &tab.gpt[i], &tab.gz[i], &tab.gpz[i]);
  return tab;
}

AmplitudePair amplitude_from_table(const FilonTable& tab, double k,
                                   double alpha_c) {
  const double e = std::sqrt(4.0 * kPi * alpha_c);
  const std::complex<double> It = filon_cubic(tab.xi, tab.gt, tab.gpt, k);
  const std::complex<double> Iz = filon_cubic(tab.xi, tab.gz, tab.gpz, k);
  AmplitudePair a;
  if (tab.form == AmplitudeForm::velocity) {
    a.A_t = -e * It;
    a.A_z = e * Iz;
  } else {
    const std::complex<double> pref(0.0, 1.0 / k);
    a.A_t = -e * pref * It;
    a.A_z = e * pref * Iz;
  }
  return a;
}

AmplitudePair amplitude_adaptive(const Trajectory& tr, const XiFrame& fr,
                                 double k, const CutoffFunction& chi,
                                 AmplitudeForm form,
                                 const AmplitudeControl& ctl) {
  const SupportImage im = check_coverage(tr, fr, chi);
  const double c = fr.cos_theta();

  auto value_at = [&](double xi, bool z_component) {
    const double t = fr.t_of_xi(xi);
    double gt, gpt, gz, gpz;
    integrand_values(tr, c, t, xi, chi, form, &gt, &gpt, &gz, &gpz);
    const double g = z_component ? gz : gt;
    return g * std::exp(std::complex<double>(0.0, k * xi));
  };

  // Integrate piecewise so that every adaptive panel sees a smooth integrand
  // (the window and the trajectory join with limited continuity class at the
  // segment boundaries).
  double cuts[6] = {chi.lo(),  chi.xi_a(), im.xs_lo,
                    im.xs_hi, chi.xi_b(), chi.hi()};
  QuadratureControl qc;
  qc.rel_tol = ctl.rel_tol;
  qc.initial_intervals = 4;

  AmplitudePair out;
  std::complex<double> It{}, Iz{};
  for (int s = 0; s < 5; ++s) {
    if (!(cuts[s + 1] > cuts[s])) continue;
    It += integrate_adaptive([&](double xi) { return value_at(xi, false); },
                             cuts[s], cuts[s + 1], qc)
              .value;
    Iz += integrate_adaptive([&](double xi) { return value_at(xi, true); },
                             cuts[s], cuts[s + 1], qc)
              .value;
  }
  const double e = std::sqrt(4.0 * kPi * tr.particle().alpha_c);
  if (form == AmplitudeForm::velocity) {
    out.A_t = -e * It;
    out.A_z = e * Iz;
  } else {
    const std::complex<double> pref(0.0, 1.0 / k);
    out.A_t = -e * pref * It;
    out.A_z = e * pref * Iz;
  }
  return out;
}

}  // namespace

AmplitudePair emission_amplitude(const Trajectory& traj, double k, double theta,
                                 const CutoffFunction& chi, AmplitudeForm form,
                                 const AmplitudeControl& ctl) {
  if (k == 0.0) throw DomainError("emission amplitude requires k != 0");
  const XiFrame fr(traj, theta);
  const double span = chi.hi() - chi.lo();
  if (std::abs(k) * span > ctl.filon_threshold) {
    const FilonTable tab = build_filon_table(traj, fr, chi, form, ctl);
    return amplitude_from_table(tab, k, traj.particle().alpha_c);
  }
  return amplitude_adaptive(traj, fr, k, chi, form, ctl);
}

namespace {

// Run fn(i) for i in [0, n) on up to `workers` async tasks; results must be
// written to disjoint slots so the assembly stays deterministic.
template <class Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int tasks = std::min(workers, n);
  std::vector<std::future<void>> futs;
  futs.reserve(tasks);
  for (int w = 0; w < tasks; ++w) {
    futs.push_back(std::async(std::launch::async, [&fn, w, n, tasks] {
      for (int i = w; i < n; i += tasks) fn(i);
    }));
  }
  for (auto& f : futs) f.get();
}

}  // namespace

SpectralResult energy_spectral(const Trajectory& traj,
                               const CutoffFunction& chi, double k_max,
                               const SpectralControl& ctl, SpectrumGrid* grid) {
  if (ctl.n_theta < 4 || ctl.nodes_per_panel < 4)
    throw DomainError("spectral control needs at least 4 nodes per direction");
  if (!(ctl.k_panel_width > 0.0))
    throw DomainError("spectral k panel width must be positive");

  const double alpha = traj.particle().alpha_c;
  SpectralResult res;
  res.artifact = -alpha * chi.c_profile() / chi.width();

  const GaussLegendre glc(ctl.n_theta);
  const GaussLegendre glk(ctl.nodes_per_panel);
  const int nth = ctl.n_theta;
  const int nk = ctl.nodes_per_panel;

  // Per-angle Filon tables; g and g' do not depend on k, so each panel costs
  // only the oscillatory moments.
  std::vector<FilonTable> tables(nth);
  parallel_for(nth, ctl.workers, [&](int j) {
    const XiFrame fr(traj, std::acos(glc.x[j]));
    tables[j] =
        build_filon_table(traj, fr, chi, AmplitudeForm::ibp, ctl.amplitude);
  });

  if (grid) {
    grid->k.clear();
    grid->cos_theta.assign(glc.x.begin(), glc.x.end());
    grid->cos_theta_weight.assign(glc.w.begin(), glc.w.end());
    grid->amplitude.clear();
    grid->dE_dk_dcos.clear();
  }

  double total = 0.0;
  std::vector<double> panel_val, panel_mid;
  std::vector<AmplitudePair> amps(static_cast<std::size_t>(nk) * nth);
  std::vector<double> knodes(nk), kweights(nk);

  double edge0 = 0.0;
  bool converged = false;
  for (int panel = 0; panel < ctl.max_panels && !converged; ++panel) {
    const double edge1 = edge0 + ctl.k_panel_width;
    if (k_max > 0.0 && edge1 > k_max * (1.0 + 1e-12))
      throw TailError(
          "spectral tail still above tolerance at the requested k cap");

    for (int i = 0; i < nk; ++i) {
      knodes[i] = 0.5 * (edge0 + edge1) + 0.5 * (edge1 - edge0) * glk.x[i];
      kweights[i] = 0.5 * (edge1 - edge0) * glk.w[i];
    }
    parallel_for(nk, ctl.workers, [&](int i) {
      for (int j = 0; j < nth; ++j)
        amps[static_cast<std::size_t>(i) * nth + j] =
            amplitude_from_table(tables[j], knodes[i], alpha);
    });

    double value = 0.0;
    for (int i = 0; i < nk; ++i) {
      double angular = 0.0;
      for (int j = 0; j < nth; ++j) {
        const AmplitudePair& a = amps[static_cast<std::size_t>(i) * nth + j];
        angular += glc.w[j] * (std::norm(a.A_t) - std::norm(a.A_z));
      }
      value += kweights[i] * knodes[i] * knodes[i] * angular;
      if (grid) {
        grid->k.push_back(knodes[i]);
        double density = 0.0;
        for (int j = 0; j < nth; ++j) {
          const AmplitudePair& a = amps[static_cast<std::size_t>(i) * nth + j];
          grid->amplitude.push_back(a);
          density = -knodes[i] * knodes[i] *
                    (std::norm(a.A_t) - std::norm(a.A_z)) / (8.0 * kPi * kPi);
          grid->dE_dk_dcos.push_back(density);
        }
      }
    }
    value *= -1.0 / (8.0 * kPi * kPi);

    total += value;
    panel_val.push_back(std::abs(value));
    panel_mid.push_back(0.5 * (edge0 + edge1));
    res.k_used = edge1;

    const double scale = std::max(std::abs(total), 1e-300);
    const int n = static_cast<int>(panel_val.size()) - 1;
    if (panel_val[n] <= 1e-3 * ctl.tail_rel_tol * scale) {
      // The spectrum has already collapsed below anything the fit could add.
      res.tail_estimate = panel_val[n];
      res.slope = ctl.min_slope;
      converged = true;
    } else if (n >= 2 && panel_val[n] < panel_val[n - 1] &&
               panel_val[n - 1] < panel_val[n - 2]) {
      const double s = std::log(panel_val[n - 1] / panel_val[n]) /
                       std::log(panel_mid[n] / panel_mid[n - 1]);
      if (s > ctl.min_slope) {
        const double density = panel_val[n] / ctl.k_panel_width;
        const double tail = density * std::pow(panel_mid[n], s) *
                            std::pow(edge1, 1.0 - s) / (s - 1.0);
        if (tail <= ctl.tail_rel_tol * scale) {
          res.tail_estimate = tail;
          res.slope = s;
          converged = true;
        }
      }
    }
    edge0 = edge1;
  }
  if (!converged)
    throw TailError("spectral panel budget exhausted before tail convergence");

  res.E_raw = total;
  res.E_em = total - res.artifact;
  return res;
}

double energy_time_domain(const Trajectory& traj) {
  const double ta = traj.t_acc_begin();
  const double tb = traj.t_acc_end();
  if (!(tb > ta)) return 0.0;
  static const GaussLegendre gl(64);
  auto integrand = [&](double t) {
    const TrajectorySample s = traj.eval(t);
    if (s.zddot == 0.0) return 0.0;
    double angular = 0.0;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double c = gl.x[j];
      const double u = 1.0 - s.zdot * c;
      angular += gl.w[j] * (1.0 - c * c) / (u * u * u * u * u);
    }
    return s.zddot * s.zddot * angular;
  };
  QuadratureControl qc;
  qc.rel_tol = 1e-13;
  qc.initial_intervals = 8;
  return 0.5 * traj.particle().alpha_c *
         integrate_adaptive(integrand, ta, tb, qc).value;
}

ExtrapolatedSpectral extrapolate_spectral_energy(const Trajectory& traj,
                                                 double width, double k_max,
                                                 const SpectralControl& ctl,
                                                 int smoothness_order) {
  if (!(width > 0.0)) throw DomainError("extrapolation width must be positive");
  ExtrapolatedSpectral out;
  const CutoffFunction chi_w = make_cutoff(traj, width, smoothness_order);
  const CutoffFunction chi_2w = make_cutoff(traj, 2.0 * width, smoothness_order);
  out.at_w = energy_spectral(traj, chi_w, k_max, ctl);
  out.at_2w = energy_spectral(traj, chi_2w, k_max, ctl);
  out.E_extr = 2.0 * out.at_2w.E_raw - out.at_w.E_raw;
  out.disagreement = std::abs(out.E_extr - out.at_w.E_em);
  return out;
}

double solid_angle_dtau_sq(double zdot) {
  if (!(std::abs(zdot) < 1.0))
    throw DomainError("solid-angle integral needs |zdot| < 1");
  auto f = [&](double c) {
    const double u = 1.0 - zdot * c;
    return (1.0 - zdot * zdot) / (u * u);
  };
  QuadratureControl qc;
  qc.rel_tol = 1e-14;
  qc.initial_intervals = 4;
  return 2.0 * kPi * integrate_adaptive(f, -1.0, 1.0, qc).value;
}

}  // namespace radshift
