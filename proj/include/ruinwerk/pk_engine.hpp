#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ruinwerk/risk_model.hpp"

namespace ruinwerk::pk {

// A CDF of a nonnegative random variable sampled on the uniform grid
// {0, h, 2h, ..., x_max}, with the mass exactly at 0 tracked separately so
// that degenerate factors (G when Z = 0) convolve exactly.
struct DistributionGrid {
    double x_max = 0.0;
    double h = 0.0;
    double atom0 = 0.0;          // P(X = 0)
    std::vector<double> values;  // values[i] = F(i*h), including atom0

    std::size_t size() const { return values.size(); }
    double x_at(std::size_t i) const { return static_cast<double>(i) * h; }

    // Linear interpolation between grid points; clamps beyond x_max.
    double value_at(double x) const;
};

// Sample a pointwise CDF evaluator onto a grid. atom0 = f(0); values are
// clamped to [0,1] and made nondecreasing by running max.
DistributionGrid grid_from_cdf(const std::function<double(double)>& f, double x_max, double h);

// CDF of the sum of independent draws from A and B (Stieltjes convolution on
// the grid). Atoms at 0 multiply exactly; the absolutely continuous parts
// convolve with trapezoid weights. Grids must have equal h and x_max.
DistributionGrid convolve(const DistributionGrid& a, const DistributionGrid& b);

// Reference O(n^2) evaluation of the same convolution rule; the FFT path in
// convolve() must reproduce it to rounding.
DistributionGrid convolve_direct(const DistributionGrid& a, const DistributionGrid& b);

// Survival probability curve theta on the grid by the geometric-compound
// series theta = (1-rho) sum_n rho^n (G^{(n+1)*} * H^{n*}), truncated at
// N = ceil(ln tol / ln rho) so the discarded tail is at most tol.
DistributionGrid pk_survival(const RiskModel& model, double x_max, double h, double tol);

// Classical closed form for exponential claims (the test oracle):
// theta(x) = 1 - rho exp(-claim_rate (1-rho) x), rho = lambda/(c*claim_rate).
double classical_survival_exact(double c, double lambda, double claim_rate, double x);

// Default grid extent: the smallest power-of-two multiple of 1 such that
// theta(x_max) >= 1 - 10*tol, probed via Laplace inversion of d/psi.
double default_x_max(const RiskModel& model, double tol);

} // namespace ruinwerk::pk
