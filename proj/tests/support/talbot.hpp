#pragma once

// Fixed-Talbot contour inversion (Abate-Valko), test-side only: a second
// inversion family, independent of Gaver-Stehfest, for cross-checking on
// transforms that extend to complex arguments.

#include <cmath>
#include <complex>
#include <functional>

namespace talbot {

inline double invert(const std::function<std::complex<double>(std::complex<double>)>& f, double t,
                     int m = 32) {
    const double r = 2.0 * m / (5.0 * t);
    std::complex<double> acc = 0.5 * f(std::complex<double>(r, 0.0)) * std::exp(r * t);
    for (int k = 1; k < m; ++k) {
        const double theta = k * M_PI / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const std::complex<double> ds(0.0, 1.0);
        acc += (std::exp(s * t) * f(s) * (std::complex<double>(1.0, 0.0) + ds * sigma)).real();
    }
    return (r / m) * acc.real();
}

} // namespace talbot
