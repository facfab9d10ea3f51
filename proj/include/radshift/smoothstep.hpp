#pragma once

#include <vector>

namespace radshift {

// Polynomial smoothstep on [a, b]: exactly 0 left of a, exactly 1 right of b,
// and in between the unique degree-`order` polynomial whose first
// floor(order/2) derivatives vanish at both endpoints.  `order` must be odd
// and >= 5, so the glued function is at least C^2 on the whole real line and
// the support of every derivative is exactly compact.
class SmoothStepProfile {
 public:
  SmoothStepProfile(int order, double a, double b);

  double value(double x) const;
  double deriv1(double x) const;
  double deriv2(double x) const;

  int order() const { return order_; }
  // Number of derivatives that vanish at both endpoints (= continuity class).
  int vanishing_derivatives() const { return n_; }
  double left() const { return a_; }
  double right() const { return b_; }
  double width() const { return 1.0 / inv_w_; }

  // Closed form of the unit-domain integral of S'(u)^2 over [0, 1].
  // The corresponding integral of deriv1(x)^2 over [a, b] is this / (b - a).
  double unit_slope_sq_integral() const;

 private:
  double unit_value(double u) const;  // u in [0, 1/2]; callers fold by symmetry

  int order_;
  int n_;                      // floor(order / 2)
  double a_, b_, inv_w_;
  double lead_;                // S'(u) = lead_ * u^n (1-u)^n
  std::vector<double> coeff_;  // S(u) = u^(n+1) * sum_k coeff_[k] u^k
};

}  // namespace radshift
