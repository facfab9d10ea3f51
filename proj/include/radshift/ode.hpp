#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "radshift/errors.hpp"

namespace radshift {

// Failure of the adaptive step-size machinery (step underflow / step budget).
struct IntegrationError : Error {
  using Error::Error;
};

struct OdeControl {
  double rel_tol = 1.0e-12;
  double abs_tol = 1.0e-12;
  double h_init = 0.0;             // 0 = pick automatically
  double h_max = 0.0;              // 0 = span of integration
  std::size_t max_steps = 2'000'000;
};

// One accepted step of the Dormand-Prince 5(4) pair together with the
// coefficients of the quartic dense-output interpolant.  h keeps the sign of
// the integration direction; the interpolant is valid for theta in [0, 1].
template <int N>
struct OdeStep {
  double t0;
  double h;
  std::array<std::array<double, N>, 5> rcont;
};

template <int N>
class OdeSolution {
 public:
  using State = std::array<double, N>;

  State eval(double t) const {
    const OdeStep<N>& s = locate(t);
    const double th = (t - s.t0) / s.h;
    State y;
    for (int i = 0; i < N; ++i) {
      y[i] = s.rcont[0][i] +
             th * (s.rcont[1][i] +
                   (1.0 - th) * (s.rcont[2][i] +
                                 th * (s.rcont[3][i] + (1.0 - th) * s.rcont[4][i])));
    }
    return y;
  }

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  std::size_t step_count() const { return steps_.size(); }
  const std::vector<OdeStep<N>>& steps() const { return steps_; }

 private:
  const OdeStep<N>& locate(double t) const {
    const double slack = 1e-9 * (std::abs(t_begin_) + std::abs(t_end_) + 1.0);
    if (t < t_begin_ - slack || t > t_end_ + slack)
      throw DomainError("ode solution evaluated outside its time range");
    auto it = std::upper_bound(lo_.begin(), lo_.end(), t);
    std::size_t idx = (it == lo_.begin()) ? 0 : (it - lo_.begin() - 1);
    return steps_[idx];
  }

  double t_begin_ = 0.0, t_end_ = 0.0;
  std::vector<OdeStep<N>> steps_;  // ascending in time
  std::vector<double> lo_;         // lower time edge of each step

  template <int M, class F>
  friend OdeSolution<M> integrate_ode(F&& f, const std::array<double, M>& y0,
                                      double t0, double t1, const OdeControl& ctl);
};

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) with dense output.
// Integrates y' = f(t, y) from t0 to t1 in either direction.  f must be
// callable as f(double, const std::array<double,N>&) -> std::array<double,N>.
template <int N, class F>
OdeSolution<N> integrate_ode(F&& f, const std::array<double, N>& y0, double t0,
                             double t1, const OdeControl& ctl = {}) {
  using State = std::array<double, N>;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Dense-output weights (Hairer, Noersett, Wanner, vol. I, DOPRI5).
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  if (t1 == t0) throw DomainError("ode integration over an empty interval");

  OdeSolution<N> sol;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = (ctl.h_max > 0.0) ? ctl.h_max : span;

  State y = y0;
  double t = t0;
  State k1 = f(t, y);

  // Crude but serviceable initial step: limited by scale and by the span.
  double h = ctl.h_init;
  if (h <= 0.0) {
    double ynorm = 0.0, fnorm = 0.0;
    for (int i = 0; i < N; ++i) {
      ynorm = std::max(ynorm, std::abs(y[i]));
      fnorm = std::max(fnorm, std::abs(k1[i]));
    }
    double scale = (fnorm > 0.0) ? (ynorm + 1.0) / fnorm : span;
    h = std::max(std::min({span / 100.0, scale / 100.0, hmax}), span * 1e-10);
  }
  h *= dir;

  std::size_t nsteps = 0;
  bool last = false;
  while (!last) {
    if (++nsteps > ctl.max_steps)
      throw IntegrationError("ode integration exceeded the step budget");
    if (std::abs(h) < 1e-14 * (std::abs(t) + 1.0))
      throw IntegrationError("ode step size underflow");
    if ((t + h - t1) * dir >= 0.0) {
      h = t1 - t;
      last = true;
    }

    State y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
    State k2 = f(t + c2 * h, y2);
    for (int i = 0; i < N; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    State k3 = f(t + c3 * h, y3);
    for (int i = 0; i < N; ++i)
      y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    State k4 = f(t + c4 * h, y4);
    for (int i = 0; i < N; ++i)
      y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    State k5 = f(t + c5 * h, y5);
    for (int i = 0; i < N; ++i)
      y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                          a65 * k5[i]);
    State k6 = f(t + h, y6);
    for (int i = 0; i < N; ++i)
      y7[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                          a76 * k6[i]);
    State k7 = f(t + h, y7);  // FSAL

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
      double sc = ctl.abs_tol +
                  ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y7[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      OdeStep<N> st;
      st.t0 = t;
      st.h = h;
      for (int i = 0; i < N; ++i) {
        double dy = y7[i] - y[i];
        double bspl = h * k1[i] - dy;
        st.rcont[0][i] = y[i];
        st.rcont[1][i] = dy;
        st.rcont[2][i] = bspl;
        st.rcont[3][i] = dy - h * k7[i] - bspl;
        st.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                              d6 * k6[i] + d7 * k7[i]);
      }
      sol.steps_.push_back(st);
      t += h;
      y = y7;
      k1 = k7;
      double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
      h *= fac;
      if (std::abs(h) > hmax) h = dir * hmax;
    } else {
      last = false;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }

  if (dir < 0.0) std::reverse(sol.steps_.begin(), sol.steps_.end());
  sol.lo_.reserve(sol.steps_.size());
  for (const auto& s : sol.steps_)
    sol.lo_.push_back((s.h > 0.0) ? s.t0 : s.t0 + s.h);
  sol.t_begin_ = std::min(t0, t1);
  sol.t_end_ = std::max(t0, t1);
  return sol;
}

}  // namespace radshift
