#include "ruinwerk/claims.hpp"

#include "ruinwerk/math_detail.hpp"

namespace ruinwerk {

ClaimModel::ClaimModel(Variant v) : claims_(std::move(v)) {
    std::visit(
        [](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                if (!(c.rate > 0.0)) throw std::invalid_argument("compound poisson claims: rate must be > 0");
            } else {
                if (!(c.shape > 0.0)) throw std::invalid_argument("gamma process claims: shape must be > 0");
                if (!(c.rate > 0.0)) throw std::invalid_argument("gamma process claims: rate must be > 0");
            }
        },
        claims_);
}

double ClaimModel::exponent(double beta) const {
    if (beta < 0.0) throw std::domain_error("claim exponent: beta must be >= 0");
    if (beta == 0.0) return 0.0;
    return std::visit(
        [beta](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                return c.rate * c.jump.one_minus_laplace(beta);
            } else {
                return c.shape * std::log1p(beta / c.rate);
            }
        },
        claims_);
}

std::complex<double> ClaimModel::exponent(std::complex<double> z) const {
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        throw std::domain_error("claim exponent: z must lie off the negative real axis");
    }
    return std::visit(
        [z](const auto& c) -> std::complex<double> {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                return c.rate * (1.0 - c.jump.laplace(z));
            } else {
                return c.shape * std::log(1.0 + z / c.rate);
            }
        },
        claims_);
}

double ClaimModel::exponent_derivative(double beta) const {
    if (beta < 0.0) throw std::domain_error("claim exponent: beta must be >= 0");
    if (beta == 0.0) return mean_rate();
    return std::visit(
        [beta](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                return c.rate * c.jump.laplace_neg_derivative(beta);
            } else {
                return c.shape / (c.rate + beta);
            }
        },
        claims_);
}

double ClaimModel::mean_rate() const {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) return c.rate * c.jump.mean();
            else return c.shape / c.rate;
        },
        claims_);
}

double ClaimModel::levy_tail(double x) const {
    if (!(x > 0.0)) throw std::domain_error("levy tail: x must be > 0");
    return std::visit(
        [x](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                return c.rate * c.jump.tail(x);
            } else {
                // nu(x, inf) = a * E1(b x)
                return c.shape * detail::expint_e1(c.rate * x);
            }
        },
        claims_);
}

double ClaimModel::integrated_tail_cdf(double x) const {
    if (x < 0.0) throw std::domain_error("integrated tail: x must be >= 0");
    if (x == 0.0) return 0.0;
    return std::visit(
        [x](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                return c.jump.integrated_tail_cdf(x);
            } else {
                // int_0^z E1(u) du = 1 - e^{-z} + z E1(z), z = b x (the shape
                // a cancels against EC(1) = a/b).
                const double z = c.rate * x;
                double v = -std::expm1(-z) + z * detail::expint_e1(z);
                return v < 1.0 ? v : 1.0;
            }
        },
        claims_);
}

} // namespace ruinwerk
