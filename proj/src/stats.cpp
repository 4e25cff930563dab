#include "ruinwerk/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ruinwerk::stats {

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    if (x > 8.0) return 0.0;
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::min(1.0, 2.0 * sum);
}

double kolmogorov_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("kolmogorov_critical: alpha in (0,1)");
    double lo = 0.1, hi = 8.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_q(mid) > alpha) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return {d, kolmogorov_q(std::sqrt(n) * d), sample.size()};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_q(std::sqrt(ne) * d), static_cast<std::size_t>(ne)};
}

double chi_square_p_value(double statistic, std::size_t dof) {
    if (dof == 0) return 1.0;
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

namespace {

// Empirical quartile edges; returns false if ties make the bins degenerate.
bool quartile_edges(std::vector<double> v, double edges[3]) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    edges[0] = v[n / 4];
    edges[1] = v[n / 2];
    edges[2] = v[(3 * n) / 4];
    return edges[0] < edges[1] && edges[1] < edges[2];
}

} // namespace

ChiSquareResult chi_square_independence(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("chi_square_independence: size mismatch");
    if (a.size() < 16) throw std::invalid_argument("chi_square_independence: too few pairs");
    double ea[3], eb[3];
    if (!quartile_edges(a, ea) || !quartile_edges(b, eb)) {
        return {0.0, 1.0, 0}; // degenerate margin
    }
    auto bin = [](double x, const double e[3]) {
        if (x <= e[0]) return 0;
        if (x <= e[1]) return 1;
        if (x <= e[2]) return 2;
        return 3;
    };
    double obs[4][4] = {};
    for (std::size_t k = 0; k < a.size(); ++k) obs[bin(a[k], ea)][bin(b[k], eb)] += 1.0;
    double row[4] = {}, col[4] = {};
    const double n = static_cast<double>(a.size());
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            row[i] += obs[i][j];
            col[j] += obs[i][j];
        }
    }
    double stat = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double expect = row[i] * col[j] / n;
            if (expect <= 0.0) return {0.0, 1.0, 0};
            const double diff = obs[i][j] - expect;
            stat += diff * diff / expect;
        }
    }
    const std::size_t dof = 9;
    return {stat, chi_square_p_value(stat, dof), dof};
}

ChiSquareResult chi_square_geometric_gof(const std::vector<std::size_t>& counts, double success) {
    if (counts.empty()) throw std::invalid_argument("chi_square_geometric_gof: empty sample");
    if (!(success > 0.0 && success < 1.0)) {
        throw std::invalid_argument("chi_square_geometric_gof: success probability in (0,1)");
    }
    const double n = static_cast<double>(counts.size());
    const std::size_t max_n = *std::max_element(counts.begin(), counts.end());

    // Choose the last unmerged value K so every bin, including the tail
    // {N > K}, has expected count >= 5.
    auto expands_ok = [&](std::size_t m) {
        return n * success * std::pow(1.0 - success, static_cast<double>(m)) >= 5.0 &&
               n * std::pow(1.0 - success, static_cast<double>(m) + 1.0) >= 5.0;
    };
    std::size_t k_last = 0;
    while (expands_ok(k_last + 1) && k_last + 1 <= max_n + 1) ++k_last;
    const std::size_t n_bins = k_last + 2; // values 0..k_last plus the tail
    std::vector<double> obs(n_bins, 0.0), expect(n_bins, 0.0);
    for (const auto c : counts) obs[std::min(c, k_last + 1)] += 1.0;
    for (std::size_t k = 0; k <= k_last; ++k) {
        expect[k] = n * success * std::pow(1.0 - success, static_cast<double>(k));
    }
    expect[k_last + 1] = n * std::pow(1.0 - success, static_cast<double>(k_last) + 1.0);

    double stat = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double diff = obs[k] - expect[k];
        stat += diff * diff / expect[k];
    }
    const std::size_t dof = n_bins - 1;
    return {stat, chi_square_p_value(stat, dof), dof};
}

double ecdf(const std::vector<double>& sorted_sample, double x) {
    const auto it = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), x);
    return static_cast<double>(it - sorted_sample.begin()) / static_cast<double>(sorted_sample.size());
}

MeanResult sample_mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("sample_mean: empty sample");
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double n = static_cast<double>(xs.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n * std::max(1.0, n - 1.0))), xs.size()};
}

} // namespace ruinwerk::stats
