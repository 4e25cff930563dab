#include "ruinwerk/math_detail.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ruinwerk::detail {

namespace {

template <typename T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <typename T>
T expm1_generic(const T& u) {
    if constexpr (std::is_same_v<T, double>) {
        return std::expm1(u);
    } else {
        if (std::abs(u) < 1e-8) return u * (1.0 + 0.5 * u);
        return std::exp(u) - T(1.0);
    }
}

// Modified Lentz evaluation of the continued fraction
//   J_nu(z) = 1 / (z + nu - 1*nu / (z + nu + 2 - 2*(nu+1) / (z + nu + 4 - ...)))
// (the e^z z^{nu-1} Gamma(1-nu, z) fraction). Converges for Re z > 0; slower
// as z -> 0, hence the small-z series branch below.
template <typename T>
T lomax_j_cf(double nu, T z) {
    constexpr double tiny = 1e-300;
    T b = z + nu;
    T c = b / tiny;
    T d = T(1.0) / b;
    T h = d;
    for (int i = 1; i <= 200000; ++i) {
        const double a = -static_cast<double>(i) * (nu + (i - 1));
        b += 2.0;
        d = b + a * d;
        if (magnitude(d) < tiny) d = T(tiny);
        c = b + a / c;
        if (magnitude(c) < tiny) c = T(tiny);
        d = T(1.0) / d;
        const T delta = c * d;
        h *= delta;
        if (magnitude(delta - T(1.0)) < 1e-16) return h;
    }
    throw std::runtime_error("lomax_j: continued fraction failed to converge");
}

// Asymptotic series J_nu(z) ~ (1/z) sum_k (-1)^k (nu)_k / z^k, truncated at
// the smallest term; error below 1e-15 for |z| >= 50 and moderate nu.
template <typename T>
T lomax_j_asymptotic(double nu, T z) {
    T term = T(1.0);
    T sum = T(1.0);
    double mag = 1.0;
    for (int k = 1; k <= 60; ++k) {
        const double next_mag = mag * (nu + (k - 1)) / magnitude(z);
        if (next_mag >= mag) break; // past the smallest term
        mag = next_mag;
        term *= -(nu + (k - 1)) / z;
        sum += term;
        if (mag < 1e-17) break;
    }
    return sum / z;
}

// Small-z evaluation: reduce nu to s in (0, 1] by the integration-by-parts
// recursion J_{t+1}(z) = (1 - z J_t(z)) / t, with the base case from the
// incomplete-gamma power series,
//   J_s(z) = e^z [ z^{s-1} Gamma(1-s) - sum_n (-z)^n / (n! (1-s+n)) ].
// The n = 0 term is folded into the Gamma term through expm1 so the s -> 1
// cancellation is exact.
template <typename T>
T lomax_j_series(double nu, T z) {
    int steps = 0;
    double s = nu;
    while (s > 1.0) {
        s -= 1.0;
        ++steps;
    }
    const double one_minus_s = 1.0 - s;
    const T log_z = std::log(z);
    T base;
    if (one_minus_s < 1e-9) {
        base = -log_z - 0.57721566490153286;
    } else {
        const T u = -one_minus_s * log_z + std::lgamma(1.0 + one_minus_s);
        base = expm1_generic(u) / one_minus_s;
    }
    T term = T(1.0); // (-z)^n / n!
    for (int n = 1; n <= 60; ++n) {
        term *= -z / static_cast<double>(n);
        base += -term / (one_minus_s + n);
        if (magnitude(term) < 1e-18) break;
    }
    T j = std::exp(z) * base;
    double t = s;
    for (int i = 0; i < steps; ++i) {
        j = (T(1.0) - z * j) / t;
        t += 1.0;
    }
    return j;
}

template <typename T>
T lomax_j_impl(double nu, T z) {
    if (!(nu > 0.0)) throw std::domain_error("lomax_j: nu must be > 0");
    const double m = magnitude(z);
    if (!(m > 0.0)) throw std::domain_error("lomax_j: need z != 0 off the negative real axis");
    if (m >= 30.0) return lomax_j_asymptotic(nu, z);
    if (m < 0.02) return lomax_j_series(nu, z);
    return lomax_j_cf(nu, z);
}

} // namespace

double lomax_j(double nu, double z) {
    if (!(z > 0.0)) throw std::domain_error("lomax_j: z must be > 0");
    return lomax_j_impl(nu, z);
}

std::complex<double> lomax_j(double nu, std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        throw std::domain_error("lomax_j: z must lie off the negative real axis");
    }
    return lomax_j_impl(nu, z);
}

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: x must be > 0");
    return boost::math::expint(1, x);
}

} // namespace ruinwerk::detail
