#pragma once

namespace frflow::detail {

// m-th positive zero of J_nu for nu in {0, 1}; McMahon expansion plus Newton.
double bessel_zero(int nu, int m);

// integral over (0, inf) of exp(-rho^alpha) J_nu(rho r) rho^{1+nu} d rho.
// G(r) = I_0 / (2 pi), G'(r) = -I_1 / (2 pi). Exposed for tests: at alpha = 1
// the integrals have the closed Cauchy forms (1+r^2)^{-3/2} and
// 3 r (1+r^2)^{-5/2} even though the production range is alpha in (1, 2].
double hankel_integral(double r, double alpha, int nu);

}  // namespace frflow::detail
