#include "radshift/smoothstep.hpp"

#include <cmath>

#include "radshift/errors.hpp"

namespace radshift {

namespace {

// Exact binomial for the small arguments used here (long double mantissa
// holds C(60,30) and friends exactly).
long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  if (k > n - k) k = n - k;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (long double)(n - k + i) / (long double)i;
  return r;
}

}  // namespace

SmoothStepProfile::SmoothStepProfile(int order, double a, double b)
    : order_(order), n_(order / 2), a_(a), b_(b) {
  if (order < 5 || order % 2 == 0)
    throw DomainError("smoothstep order must be odd and >= 5");
  if (order > 31)
    throw DomainError("smoothstep order above 31 is not supported");
  if (!(b > a)) throw DomainError("smoothstep domain must have positive width");
  inv_w_ = 1.0 / (b - a);

  // S(u) = u^(n+1) sum_{k=0}^{n} C(n+k,k) C(2n+1,n-k) (-u)^k
  coeff_.resize(n_ + 1);
  for (int k = 0; k <= n_; ++k) {
    long double c = binomial(n_ + k, k) * binomial(2 * n_ + 1, n_ - k);
    coeff_[k] = (double)((k % 2 == 0) ? c : -c);
  }
  lead_ = (double)((long double)(2 * n_ + 1) * binomial(2 * n_, n_));
}

double SmoothStepProfile::unit_value(double u) const {
  double s = coeff_[n_];
  for (int k = n_ - 1; k >= 0; --k) s = coeff_[k] + u * s;
  return std::pow(u, n_ + 1) * s;
}

double SmoothStepProfile::value(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  double u = (x - a_) * inv_w_;
  // Evaluate on the lower half only: the odd-order step is symmetric about
  // the midpoint, and this keeps full relative accuracy near both endpoints.
  return (u <= 0.5) ? unit_value(u) : 1.0 - unit_value(1.0 - u);
}

double SmoothStepProfile::deriv1(double x) const {
  if (x <= a_ || x >= b_) return 0.0;
  double u = (x - a_) * inv_w_;
  return lead_ * std::pow(u * (1.0 - u), n_) * inv_w_;
}

double SmoothStepProfile::deriv2(double x) const {
  if (x <= a_ || x >= b_) return 0.0;
  double u = (x - a_) * inv_w_;
  return lead_ * n_ * std::pow(u * (1.0 - u), n_ - 1) * (1.0 - 2.0 * u) *
         inv_w_ * inv_w_;
}

double SmoothStepProfile::unit_slope_sq_integral() const {
  // int_0^1 [lead u^n (1-u)^n]^2 du = lead^2 B(2n+1, 2n+1)
  //                                 = lead^2 / ((4n+1) C(4n, 2n)).
  long double l = lead_;
  return (double)(l * l / ((long double)(4 * n_ + 1) * binomial(4 * n_, 2 * n_)));
}

}  // namespace radshift
