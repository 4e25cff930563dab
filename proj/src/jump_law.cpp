#include "ruinwerk/jump_law.hpp"

#include <algorithm>
#include <limits>

#include "ruinwerk/math_detail.hpp"

namespace ruinwerk {

void JumpLaw::validate() const {
    std::visit(
        [](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                if (!(l.rate > 0.0)) throw std::invalid_argument("exponential jump: rate must be > 0");
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                if (!(l.shape > 1.0)) throw std::invalid_argument("lomax jump: shape must be > 1 for a finite mean");
                if (!(l.scale > 0.0)) throw std::invalid_argument("lomax jump: scale must be > 0");
            } else {
                if (!(l.size > 0.0)) throw std::invalid_argument("deterministic jump: size must be > 0");
            }
        },
        law_);
}

double JumpLaw::mean() const {
    return std::visit(
        [](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) return 1.0 / l.rate;
            else if constexpr (std::is_same_v<T, LomaxJump>) return l.scale / (l.shape - 1.0);
            else return l.size;
        },
        law_);
}

double JumpLaw::tail(double x) const {
    if (x <= 0.0) return 1.0;
    return std::visit(
        [x](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) return std::exp(-l.rate * x);
            else if constexpr (std::is_same_v<T, LomaxJump>) return std::pow(1.0 + x / l.scale, -l.shape);
            else return x < l.size ? 1.0 : 0.0;
        },
        law_);
}

double JumpLaw::laplace(double beta) const {
    return 1.0 - one_minus_laplace(beta);
}

double JumpLaw::one_minus_laplace(double beta) const {
    if (beta < 0.0) throw std::domain_error("jump laplace transform: beta must be >= 0");
    if (beta == 0.0) return 0.0;
    return std::visit(
        [beta](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                return beta / (l.rate + beta);
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                // 1 - E[e^{-bY}] = b * scale * J_shape(b * scale) with
                // J_nu(z) = int_0^inf e^{-zu} (1+u)^{-nu} du.
                const double z = beta * l.scale;
                return z * detail::lomax_j(l.shape, z);
            } else {
                return -std::expm1(-beta * l.size);
            }
        },
        law_);
}

double JumpLaw::compensated_exponent(double beta) const {
    if (beta < 0.0) throw std::domain_error("jump laplace transform: beta must be >= 0");
    if (beta == 0.0) return 0.0;
    return std::visit(
        [beta](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                // beta/rate - beta/(rate+beta) = beta^2 / (rate (rate+beta))
                return beta * beta / (l.rate * (l.rate + beta));
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                // beta mean - z J_shape(z) with the recursion
                // J_shape = (1 - z J_{shape-1}) / (shape - 1) collapses to
                // z^2 J_{shape-1}(z) / (shape - 1), exactly.
                const double z = beta * l.scale;
                return z * z * detail::lomax_j(l.shape - 1.0, z) / (l.shape - 1.0);
            } else {
                const double u = beta * l.size;
                return u + std::expm1(-u);
            }
        },
        law_);
}

std::complex<double> JumpLaw::laplace(std::complex<double> z) const {
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        throw std::domain_error("jump laplace transform: z must lie off the negative real axis");
    }
    return std::visit(
        [z](const auto& l) -> std::complex<double> {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                return l.rate / (l.rate + z);
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                const std::complex<double> w = z * l.scale;
                return 1.0 - w * detail::lomax_j(l.shape, w);
            } else {
                return std::exp(-z * l.size);
            }
        },
        law_);
}

double JumpLaw::laplace_neg_derivative(double beta) const {
    if (beta < 0.0) throw std::domain_error("jump laplace transform: beta must be >= 0");
    if (beta == 0.0) return mean();
    return std::visit(
        [beta](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                const double s = l.rate + beta;
                return l.rate / (s * s);
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                // E[Y e^{-bY}] = scale * [(1+z) J_shape(z) - z J_{shape-1}(z)], z = b*scale
                const double z = beta * l.scale;
                return l.scale * ((1.0 + z) * detail::lomax_j(l.shape, z) - z * detail::lomax_j(l.shape - 1.0, z));
            } else {
                return l.size * std::exp(-beta * l.size);
            }
        },
        law_);
}

double JumpLaw::integrated_tail_cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return std::visit(
        [x](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                return -std::expm1(-l.rate * x);
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                // Integrated tail of Lomax(shape, scale) is Lomax(shape-1, scale).
                return 1.0 - std::pow(1.0 + x / l.scale, 1.0 - l.shape);
            } else {
                return std::min(x / l.size, 1.0);
            }
        },
        law_);
}

double JumpLaw::sample(rng::Philox4x32& gen) const {
    return std::visit(
        [&gen](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                return -std::log(gen.uniform()) / l.rate;
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                return l.scale * (std::pow(gen.uniform(), -1.0 / l.shape) - 1.0);
            } else {
                return l.size;
            }
        },
        law_);
}

} // namespace ruinwerk
