#include "radshift/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace radshift {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  x.resize(n);
  w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = xi;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node for the weight.
    p0 = 1.0;
    p1 = xi;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

CumulativeIntegral::CumulativeIntegral(std::vector<double> t,
                                       std::vector<double> f,
                                       std::vector<double> fp)
    : t_(std::move(t)), f_(std::move(f)), fp_(std::move(fp)) {
  if (t_.size() < 2 || t_.size() != f_.size() || t_.size() != fp_.size())
    throw DomainError("cumulative integral needs matching grids of size >= 2");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1]))
      throw DomainError("cumulative integral grid must be strictly increasing");
  F_.resize(t_.size());
  F_[0] = 0.0;
  for (std::size_t i = 1; i < t_.size(); ++i) {
    double h = t_[i] - t_[i - 1];
    // Exact integral of the cubic Hermite model: corrected trapezoid.
    F_[i] = F_[i - 1] + h * (0.5 * (f_[i - 1] + f_[i]) +
                             h * (fp_[i - 1] - fp_[i]) / 12.0);
  }
}

double CumulativeIntegral::operator()(double x) const {
  const double slack = 1e-9 * (std::abs(t_.front()) + std::abs(t_.back()) + 1.0);
  if (x < t_.front() - slack || x > t_.back() + slack)
    throw DomainError("cumulative integral evaluated outside its grid");
  x = std::clamp(x, t_.front(), t_.back());
  auto it = std::upper_bound(t_.begin(), t_.end(), x);
  std::size_t i = (it == t_.begin()) ? 0 : (it - t_.begin() - 1);
  if (i >= t_.size() - 1) i = t_.size() - 2;
  const double h = t_[i + 1] - t_[i];
  const double th = (x - t_[i]) / h;
  const double th2 = th * th, th3 = th2 * th, th4 = th3 * th;
  // Integrated Hermite basis on [0, theta].
  const double i00 = 0.5 * th4 - th3 + th;
  const double i10 = 0.25 * th4 - (2.0 / 3.0) * th3 + 0.5 * th2;
  const double i01 = -0.5 * th4 + th3;
  const double i11 = 0.25 * th4 - th3 / 3.0;
  return F_[i] + h * (f_[i] * i00 + h * fp_[i] * i10 + f_[i + 1] * i01 +
                      h * fp_[i + 1] * i11);
}

}  // namespace radshift
