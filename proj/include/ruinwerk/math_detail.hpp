#pragma once

#include <complex>

namespace ruinwerk::detail {

// J_nu(z) = int_0^inf e^{-zu} (1+u)^{-nu} du for nu > 0, continued
// analytically to the plane cut along the negative real axis. Equals
// e^z z^{nu-1} Gamma(1-nu, z); evaluated by the incomplete-gamma power
// series for small |z|, the continued fraction for moderate |z| and the
// asymptotic series for large |z|.
double lomax_j(double nu, double z);
std::complex<double> lomax_j(double nu, std::complex<double> z);

// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
double expint_e1(double x);

} // namespace ruinwerk::detail
