#pragma once

#include <complex>
#include <vector>

namespace radshift {

// Filon-type quadrature for int g(xi) e^{i k xi} d(xi) over a node sequence:
// g is replaced by its cubic Hermite interpolant (values g and derivatives gp
// at the nodes) and each piece is integrated against the exponential in
// closed form, so the cost is independent of k.  The nodes must be strictly
// increasing and should resolve g, not the oscillation.
std::complex<double> filon_cubic(const std::vector<double>& xi,
                                 const std::vector<double>& g,
                                 const std::vector<double>& gp, double k);

}  // namespace radshift
