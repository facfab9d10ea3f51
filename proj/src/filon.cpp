#include "radshift/filon.hpp"

#include <array>
#include <cmath>

#include "radshift/errors.hpp"

namespace radshift {

namespace {

using cdouble = std::complex<double>;

// Moments M_n = int_0^h u^n e^{iku} du for n = 0..3, given e = e^{ikh}.
std::array<cdouble, 4> moments(double k, double h, cdouble e) {
  std::array<cdouble, 4> m;
  const double kh = k * h;
  const cdouble ik(0.0, k);
  if (std::abs(kh) < 2.0) {
    // Upward recurrence cancels for small kh.  Sum the series for M_3 only
    // (it has no cancellation) and walk down: M_{n-1} = (h^n e - ik M_n) / n,
    // which is stable because ik M_n stays a fraction of h^n.
    const cdouble ikh(0.0, kh);
    cdouble sum{};
    cdouble fac{1.0, 0.0};  // (i k h)^j / j!
    for (int j = 0; j < 48; ++j) {
      const cdouble t = fac / double(4 + j);
      sum += t;
      if (std::abs(t.real()) + std::abs(t.imag()) <
          1e-17 * (std::abs(sum.real()) + std::abs(sum.imag()) + 1e-300))
        break;
      fac *= ikh / double(j + 1);
    }
    const double h2 = h * h;
    m[3] = h2 * h2 * sum;
    m[2] = (h2 * h * e - ik * m[3]) / 3.0;
    m[1] = (h2 * e - ik * m[2]) / 2.0;
    m[0] = h * e - ik * m[1];
    return m;
  }
  m[0] = (e - 1.0) / ik;
  double hn = 1.0;
  for (int n = 1; n < 4; ++n) {
    hn *= h;
    m[n] = (hn * e - double(n) * m[n - 1]) / ik;
  }
  return m;
}

}  // namespace

cdouble filon_cubic(const std::vector<double>& xi, const std::vector<double>& g,
                    const std::vector<double>& gp, double k) {
  if (xi.size() < 2 || xi.size() != g.size() || xi.size() != gp.size())
    throw DomainError("filon_cubic needs matching node arrays of size >= 2");
  cdouble total{};
  // March the interval phase e^{ik xi_i} multiplicatively; the accumulated
  // roundoff over n intervals is n ulps of phase, far below the integration
  // error, and it halves the trig calls.
  cdouble phase = std::exp(cdouble(0.0, k * xi.front()));
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    const double h = xi[i + 1] - xi[i];
    if (!(h > 0.0)) throw DomainError("filon_cubic nodes must be increasing");
    const double dg = g[i + 1] - g[i];
    // Power-basis coefficients of the Hermite cubic in u = xi - xi_i.
    const double c0 = g[i];
    const double c1 = gp[i];
    const double c2 = (3.0 * dg - h * (2.0 * gp[i] + gp[i + 1])) / (h * h);
    const double c3 = (-2.0 * dg + h * (gp[i] + gp[i + 1])) / (h * h * h);
    const cdouble e = std::exp(cdouble(0.0, k * h));
    const auto m = moments(k, h, e);
    total += phase * (c0 * m[0] + c1 * m[1] + c2 * m[2] + c3 * m[3]);
    phase *= e;
  }
  return total;
}

}  // namespace radshift
