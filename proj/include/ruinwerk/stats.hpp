#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ruinwerk::stats {

// Kolmogorov limit distribution Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2):
// the asymptotic p-value of sqrt(n) * D_n.
double kolmogorov_q(double x);

// Critical value K_alpha with Q(K_alpha) = alpha (e.g. K_0.01 ~ 1.6276).
double kolmogorov_critical(double alpha);

struct KsResult {
    double statistic = 0.0; // D_n
    double p_value = 1.0;   // asymptotic
    std::size_t n = 0;
};

// One-sample KS against a CDF evaluator. The asymptotic p-value is used, so
// callers should keep n >= 500.
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample KS with effective size nm/(n+m).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
};

// Chi-square independence test on a 4x4 binning of (a, b) at their empirical
// quartiles. Returns dof = 0 when a margin is too degenerate to bin.
ChiSquareResult chi_square_independence(const std::vector<double>& a, const std::vector<double>& b);

// Chi-square goodness of fit of nonnegative-integer counts against
// Geometric(success): P(N = k) = success * (1-success)^k. Tail bins are
// merged until every expected count is at least 5.
ChiSquareResult chi_square_geometric_gof(const std::vector<std::size_t>& counts, double success);

double chi_square_p_value(double statistic, std::size_t dof);

// Empirical CDF value of a sorted sample at x.
double ecdf(const std::vector<double>& sorted_sample, double x);

struct MeanResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

MeanResult sample_mean(const std::vector<double>& xs);

} // namespace ruinwerk::stats
