#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <radshift/smoothstep.hpp>
#include <radshift/trajectory.hpp>

namespace radshift {

// Smooth window chi(xi) in the retarded coordinate xi = t - z cos(theta):
// identically 0 left of xi_a - width, a polynomial smoothstep rise on
// [xi_a - width, xi_a], identically 1 on the plateau [xi_a, xi_b], and the
// mirrored fall on [xi_b, xi_b + width].  The square of the slope integrates
// to c_profile / width in closed form, which is what makes the ramp artifact
// in the radiated energy exactly removable.
class CutoffFunction {
 public:
  CutoffFunction(double xi_a, double xi_b, double width,
                 int smoothness_order = 3);

  double chi(double xi) const;
  double chi_prime(double xi) const;
  double chi_second(double xi) const;

  double xi_a() const { return xi_a_; }
  double xi_b() const { return xi_b_; }
  double width() const { return width_; }
  double lo() const { return xi_a_ - width_; }   // support starts here
  double hi() const { return xi_b_ + width_; }   // and ends here
  int smoothness_order() const { return order_; }

  // width * int chi'^2 dxi; depends only on the profile family.
  double c_profile() const;
  // int chi'^2 dxi = c_profile() / width.
  double slope_sq_integral() const;

 private:
  double xi_a_, xi_b_, width_;
  int order_;
  SmoothStepProfile rise_, fall_;
};

// Window whose plateau covers the xi-image of the acceleration support for
// every angle theta at once (the worst cases are cos(theta) = ±1).
CutoffFunction make_cutoff(const Trajectory& traj, double width,
                           int smoothness_order = 3);

// The retarded coordinate xi = t - z(t) cos(theta) along one trajectory at a
// fixed emission angle.  dxi/dt = 1 - zdot cos(theta) > 0, so the map t <-> xi
// is a strictly monotone bijection of the real line.
class XiFrame {
 public:
  XiFrame(const Trajectory& traj, double theta);

  double theta() const { return theta_; }
  double cos_theta() const { return cos_; }
  double xi_of_t(double t) const;
  double dxi_dt(double t) const;
  double t_of_xi(double xi) const;  // safeguarded Newton inversion

 private:
  const Trajectory* traj_;
  double theta_, cos_;
};

// Derivatives of the worldline with respect to xi at fixed angle.
struct XiDerivatives {
  double d2z_dxi2 = 0.0;
  double d2t_dxi2 = 0.0;
  double d3z_dxi3 = 0.0;
  double d3t_dxi3 = 0.0;
  double dtau_dxi = 0.0;  // (1/gamma) / (1 - zdot cos)
  double dxi_dt = 1.0;
};

XiDerivatives xi_derivatives(const Trajectory& traj, double theta, double t);

// Two algebraically identical writings of the emission amplitude: the
// velocity form integrates (dx^mu/dxi) chi e^{ik xi} directly, the ibp form
// moves the oscillation onto the derivative terms and carries a 1/k
// prefactor, which is the numerically stable one at large k.
enum class AmplitudeForm { velocity, ibp };

// Lower-index components (A_t, A_z); the Minkowski square is
// A* . A = |A_t|^2 - |A_z|^2.
struct AmplitudePair {
  std::complex<double> A_t{0.0, 0.0};
  std::complex<double> A_z{0.0, 0.0};
};

struct AmplitudeControl {
  // Switch from adaptive panels to Filon quadrature once |k| * window length
  // exceeds this.
  double filon_threshold = 50.0;
  // Node budgets for the Filon tables.
  int support_nodes = 2048;
  int ramp_nodes = 1024;
  // Relative tolerance of the adaptive branch.
  double rel_tol = 1e-11;
};

AmplitudePair emission_amplitude(const Trajectory& traj, double k, double theta,
                                 const CutoffFunction& chi,
                                 AmplitudeForm form = AmplitudeForm::ibp,
                                 const AmplitudeControl& ctl = {});

// Amplitude samples over the (k, cos theta) product grid, k-major.
struct SpectrumGrid {
  std::vector<double> k;
  std::vector<double> cos_theta;
  std::vector<double> cos_theta_weight;
  std::vector<AmplitudePair> amplitude;         // size k.size()*cos_theta.size()
  std::vector<double> dE_dk_dcos;               // same layout

  std::size_t index(std::size_t ik, std::size_t ic) const {
    return ik * cos_theta.size() + ic;
  }
};

struct SpectralControl {
  int n_theta = 64;           // Gauss-Legendre nodes in cos(theta)
  int nodes_per_panel = 64;   // Gauss-Legendre nodes per k panel
  double k_panel_width = 2.0; // fixed panel width in k
  double tail_rel_tol = 1e-5; // stop once the fitted tail is below this
  int max_panels = 512;
  double min_slope = 1.5;     // fitted decay must be steeper than this
  AmplitudeControl amplitude{};
  int workers = 1;            // concurrent amplitude evaluation
};

struct SpectralResult {
  double E_em = 0.0;          // artifact-subtracted energy
  double E_raw = 0.0;         // plain spectral integral
  double artifact = 0.0;      // -alpha_c c_profile / W, removed from E_raw
  double tail_estimate = 0.0; // power-law continuation beyond k_used
  double k_used = 0.0;
  double slope = 0.0;         // fitted exponent of dE/dk ~ k^{-slope}
};

// -(1/16 pi^3) int dOmega int_0^{k_max} dk k^2 A*.A, assembled panel by panel
// until the fitted power-law tail drops below tolerance.  k_max <= 0 means
// no cap.  The closed-form ramp artifact is reported and removed.
SpectralResult energy_spectral(const Trajectory& traj, const CutoffFunction& chi,
                               double k_max, const SpectralControl& ctl = {},
                               SpectrumGrid* grid = nullptr);

// Same observable through the angular contraction identity, evaluated in t:
// (alpha_c/2) int dt zddot^2 int dcos (1-cos^2)/(1-zdot cos)^5.
double energy_time_domain(const Trajectory& traj);

// Runs energy_spectral at widths W and 2W.  Because the raw energy is exactly
// linear in 1/W, 2 E_raw(2W) - E_raw(W) removes the ramp artifact without
// knowing its coefficient; the closed-form subtraction at width W should
// agree, and the difference is reported as a diagnostic.
struct ExtrapolatedSpectral {
  SpectralResult at_w;
  SpectralResult at_2w;
  double E_extr = 0.0;
  double disagreement = 0.0;  // |E_extr - at_w.E_em|
};

ExtrapolatedSpectral extrapolate_spectral_energy(const Trajectory& traj,
                                                 double width, double k_max,
                                                 const SpectralControl& ctl = {},
                                                 int smoothness_order = 3);

// Numerical int dOmega (dtau/dxi)^2 at fixed speed; equals 4 pi for every
// |zdot| < 1, which is why the chi' cross term drops out of the shift.
double solid_angle_dtau_sq(double zdot);

}  // namespace radshift
