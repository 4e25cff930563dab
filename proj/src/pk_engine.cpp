#include "ruinwerk/pk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ruinwerk/transforms.hpp"

namespace ruinwerk::pk {

namespace {

using cdouble = std::complex<double>;

// Iterative radix-2 Cooley-Tukey; sizes here are small (<= 2^18) and fixed,
// and a hand-rolled transform keeps results bitwise reproducible.
void fft_inplace(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const cdouble wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Discrete convolution w[m] = sum_j u[j] v[m-j] via FFT, m = 0..n_out-1.
std::vector<double> fft_convolve(const std::vector<double>& u, const std::vector<double>& v,
                                 std::size_t n_out) {
    const std::size_t n = next_pow2(u.size() + v.size());
    std::vector<cdouble> fu(n), fv(n);
    std::copy(u.begin(), u.end(), fu.begin());
    std::copy(v.begin(), v.end(), fv.begin());
    fft_inplace(fu, false);
    fft_inplace(fv, false);
    for (std::size_t i = 0; i < n; ++i) fu[i] *= fv[i];
    fft_inplace(fu, true);
    std::vector<double> out(n_out);
    for (std::size_t i = 0; i < n_out; ++i) out[i] = fu[i].real();
    return out;
}

void check_compatible(const DistributionGrid& a, const DistributionGrid& b) {
    if (a.h != b.h || a.size() != b.size()) {
        throw std::invalid_argument("convolve: grids must share h and x_max");
    }
}

// Raw convolution on (atom, cdf-values) pairs; values need not be bounded by 1,
// which lets the series accumulator reuse this without clamping.
// Rule: split each factor as atom*delta_0 + AC part, convolve the AC parts by
// cell mass x trapezoid-averaged values of the other CDF.
struct RawDist {
    double atom = 0.0;
    std::vector<double> values; // includes atom
};

RawDist convolve_raw(const RawDist& a, const RawDist& b, double /*h*/, bool use_fft) {
    const std::size_t n = a.values.size();
    std::vector<double> ac_a(n), ac_b(n);
    for (std::size_t i = 0; i < n; ++i) {
        ac_a[i] = a.values[i] - a.atom;
        ac_b[i] = b.values[i] - b.atom;
    }
    // Cell masses of A's AC part: u[j] = A_c(x_j) - A_c(x_{j-1}), j = 1..n-1.
    std::vector<double> u(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) u[j] = ac_a[j] - ac_a[j - 1];

    std::vector<double> w;
    if (use_fft) {
        w = fft_convolve(u, ac_b, n + 1);
    } else {
        w.assign(n + 1, 0.0);
        for (std::size_t m = 0; m <= n; ++m) {
            double acc = 0.0;
            const std::size_t j_hi = std::min(m, n - 1);
            for (std::size_t j = 1; j <= j_hi; ++j) acc += u[j] * ac_b[m - j];
            w[m] = acc;
        }
    }

    RawDist out;
    out.atom = a.atom * b.atom;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cc = 0.5 * (w[i] + w[i + 1]);
        out.values[i] = out.atom + a.atom * ac_b[i] + b.atom * ac_a[i] + cc;
    }
    return out;
}

DistributionGrid package(RawDist raw, double x_max, double h) {
    DistributionGrid g;
    g.x_max = x_max;
    g.h = h;
    g.atom0 = std::clamp(raw.atom, 0.0, 1.0);
    g.values = std::move(raw.values);
    double run = 0.0;
    for (auto& v : g.values) {
        v = std::clamp(v, 0.0, 1.0);
        run = std::max(run, v);
        v = run;
    }
    if (!g.values.empty() && g.values.front() < g.atom0) g.values.front() = g.atom0;
    return g;
}

} // namespace

double DistributionGrid::value_at(double x) const {
    if (x <= 0.0) return values.empty() ? atom0 : values.front();
    const double pos = x / h;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
}

DistributionGrid grid_from_cdf(const std::function<double(double)>& f, double x_max, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid_from_cdf: h must be > 0");
    if (!(x_max >= h)) throw std::invalid_argument("grid_from_cdf: x_max must be >= h");
    const auto n = static_cast<std::size_t>(std::llround(x_max / h)) + 1;
    DistributionGrid g;
    g.x_max = x_max;
    g.h = h;
    g.atom0 = std::clamp(f(0.0), 0.0, 1.0);
    g.values.resize(n);
    double run = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::clamp(f(static_cast<double>(i) * h), 0.0, 1.0);
        run = std::max(run, v);
        g.values[i] = run;
    }
    if (g.values.front() < g.atom0) g.values.front() = g.atom0;
    return g;
}

DistributionGrid convolve(const DistributionGrid& a, const DistributionGrid& b) {
    check_compatible(a, b);
    RawDist ra{a.atom0, a.values};
    RawDist rb{b.atom0, b.values};
    return package(convolve_raw(ra, rb, a.h, true), a.x_max, a.h);
}

DistributionGrid convolve_direct(const DistributionGrid& a, const DistributionGrid& b) {
    check_compatible(a, b);
    RawDist ra{a.atom0, a.values};
    RawDist rb{b.atom0, b.values};
    return package(convolve_raw(ra, rb, a.h, false), a.x_max, a.h);
}

DistributionGrid pk_survival(const RiskModel& model, double x_max, double h, double tol) {
    if (!(h > 0.0) || !(x_max >= h)) throw std::invalid_argument("pk_survival: invalid grid");
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("pk_survival: tol must lie in (0,1)");

    const double rho = model.rho();
    const auto n_terms = static_cast<int>(std::ceil(std::log(tol) / std::log(rho)));

    const DistributionGrid g =
        grid_from_cdf([&model](double x) { return transforms::G_cdf(model, x); }, x_max, h);
    const DistributionGrid hgrid =
        grid_from_cdf([&model](double x) { return model.claims().integrated_tail_cdf(x); }, x_max, h);

    RawDist rg{g.atom0, g.values};
    RawDist rh{hgrid.atom0, hgrid.values};
    const RawDist k = convolve_raw(rg, rh, h, true); // K = G * H

    // Horner accumulation of S = delta_0 + rho K + (rho K)^2 + ...:
    // S <- delta_0 + rho * (K * S), repeated n_terms times.
    const std::size_t n = g.values.size();
    RawDist s;
    s.atom = 1.0;
    s.values.assign(n, 1.0);
    for (int it = 0; it < n_terms; ++it) {
        RawDist ks = convolve_raw(k, s, h, true);
        s.atom = 1.0 + rho * ks.atom;
        for (std::size_t i = 0; i < n; ++i) s.values[i] = 1.0 + rho * ks.values[i];
    }
    RawDist theta = convolve_raw(rg, s, h, true);
    const double scale = 1.0 - rho;
    theta.atom *= scale;
    for (auto& v : theta.values) v *= scale;
    return package(std::move(theta), x_max, h);
}

double classical_survival_exact(double c, double lambda, double claim_rate, double x) {
    if (!(c > 0.0) || !(lambda > 0.0) || !(claim_rate > 0.0)) {
        throw std::invalid_argument("classical survival: parameters must be > 0");
    }
    const double rho = lambda / (c * claim_rate);
    if (!(rho < 1.0)) throw std::invalid_argument("classical survival: net profit condition violated");
    return 1.0 - rho * std::exp(-claim_rate * (1.0 - rho) * x);
}

double default_x_max(const RiskModel& model, double tol) {
    const auto f = transforms::survival_transform(model);
    double x = 1.0;
    for (int i = 0; i < 60; ++i) {
        if (transforms::invert_laplace(f, x) >= 1.0 - 10.0 * tol) return x;
        x *= 2.0;
    }
    throw std::runtime_error("default_x_max: survival probe did not reach the target");
}

} // namespace ruinwerk::pk
