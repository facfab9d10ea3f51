#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

#include "radshift/errors.hpp"

namespace radshift {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);
};

struct QuadratureControl {
  // Relative tolerance is measured against the accumulated L1 mass, so the
  // subdivision pattern (and hence the result, exactly) is invariant under
  // uniform rescaling of the integrand.
  double rel_tol = 1.0e-12;
  double abs_tol = 0.0;
  int max_intervals = 50000;
  int initial_intervals = 1;
};

namespace detail {

// QUADPACK 7-15 Gauss-Kronrod pair (positive abscissae half).
inline constexpr std::array<double, 8> kGK15X = {
    9.914553711208126e-01, 9.491079123427585e-01, 8.648644233597691e-01,
    7.415311855993944e-01, 5.860872354676911e-01, 4.058451513773972e-01,
    2.077849550078985e-01, 0.0};
inline constexpr std::array<double, 8> kGK15WK = {
    2.293532201052922e-02, 6.309209262997855e-02, 1.047900103222502e-01,
    1.406532597155259e-01, 1.690047266392679e-01, 1.903505780647854e-01,
    2.044329400752989e-01, 2.094821410847278e-01};
inline constexpr std::array<double, 4> kGK15WG = {
    1.294849661688697e-01, 2.797053914892767e-01, 3.818300505051189e-01,
    4.179591836734694e-01};

template <class T>
double scalar_abs(const T& v) {
  if constexpr (std::is_same_v<T, double>) return std::abs(v);
  else return std::abs(v);
}

template <class T>
struct Panel {
  double a, b;
  T val;
  double err;
  double l1;
};

template <class F>
auto gk15(F&& f, double a, double b)
    -> Panel<std::invoke_result_t<F&, double>> {
  using T = std::invoke_result_t<F&, double>;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T resk{};
  T resg{};
  double l1 = 0.0;
  // Centre node (Kronrod index 7; Gauss weight index 3).
  {
    T fc = f(c);
    resk = fc * kGK15WK[7];
    resg = fc * kGK15WG[3];
    l1 = scalar_abs(fc) * kGK15WK[7];
  }
  for (int j = 0; j < 7; ++j) {
    T f1 = f(c - h * kGK15X[j]);
    T f2 = f(c + h * kGK15X[j]);
    resk = resk + (f1 + f2) * kGK15WK[j];
    l1 += (scalar_abs(f1) + scalar_abs(f2)) * kGK15WK[j];
    if (j % 2 == 1) resg = resg + (f1 + f2) * kGK15WG[j / 2];
  }
  Panel<T> p;
  p.a = a;
  p.b = b;
  p.val = resk * h;
  p.err = scalar_abs(resk - resg) * std::abs(h);
  p.l1 = l1 * std::abs(h);
  return p;
}

}  // namespace detail

template <class T>
struct QuadratureOutcome {
  T value{};
  double error = 0.0;
  double l1 = 0.0;
  int panels = 0;
};

// Globally adaptive Gauss-Kronrod bisection.  Works for real and complex
// integrands; direction-aware (a > b integrates with the usual sign flip).
template <class F>
auto integrate_adaptive(F&& f, double a, double b,
                        const QuadratureControl& ctl = {}) {
  using T = std::invoke_result_t<F&, double>;
  QuadratureOutcome<T> out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  using P = detail::Panel<T>;
  auto cmp = [](const P& x, const P& y) { return x.err < y.err; };
  std::priority_queue<P, std::vector<P>, decltype(cmp)> q(cmp);

  T total{};
  double toterr = 0.0, totl1 = 0.0;
  int n0 = std::max(1, ctl.initial_intervals);
  for (int i = 0; i < n0; ++i) {
    double x0 = a + (b - a) * i / n0, x1 = a + (b - a) * (i + 1) / n0;
    P p = detail::gk15(f, x0, x1);
    total = total + p.val;
    toterr += p.err;
    totl1 += p.l1;
    q.push(std::move(p));
  }

  int used = n0;
  const double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    double target = std::max({ctl.abs_tol, ctl.rel_tol * totl1, 100.0 * eps * totl1});
    if (toterr <= target) break;
    if (used >= ctl.max_intervals)
      throw QuadratureError("adaptive quadrature exhausted its interval budget");
    P worst = q.top();
    q.pop();
    total = total - worst.val;
    toterr -= worst.err;
    totl1 -= worst.l1;
    double mid = 0.5 * (worst.a + worst.b);
    P left = detail::gk15(f, worst.a, mid);
    P right = detail::gk15(f, mid, worst.b);
    total = total + left.val + right.val;
    toterr += left.err + right.err;
    totl1 += left.l1 + right.l1;
    q.push(std::move(left));
    q.push(std::move(right));
    ++used;
  }

  out.value = total * sign;
  out.error = toterr;
  out.l1 = totl1;
  out.panels = used;
  return out;
}

// Cumulative antiderivative of a smooth function sampled on a grid together
// with its analytic derivative: each interval carries the exact integral of
// the cubic Hermite model, giving O(h^4) global accuracy, and the
// antiderivative can be evaluated anywhere inside the grid.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::vector<double> t, std::vector<double> f,
                     std::vector<double> fp);

  // F(x) = int_{t.front()}^{x} (Hermite model of f)
  double operator()(double x) const;
  double node_value(std::size_t i) const { return F_[i]; }
  double total() const { return F_.back(); }

 private:
  std::vector<double> t_, f_, fp_, F_;
};

}  // namespace radshift
