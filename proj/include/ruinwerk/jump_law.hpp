#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include "ruinwerk/rng.hpp"

namespace ruinwerk {

// Individual claim (or perturbation-jump magnitude) laws. All have support
// (0, inf) -- Deterministic as a single positive atom -- and a finite mean.
struct ExponentialJump {
    double rate; // 1 / mean size
};

struct LomaxJump {
    double shape; // > 1 so the mean is finite
    double scale;
};

struct DeterministicJump {
    double size;
};

class JumpLaw {
public:
    using Variant = std::variant<ExponentialJump, LomaxJump, DeterministicJump>;

    explicit JumpLaw(Variant v) : law_(std::move(v)) { validate(); }

    static JumpLaw exponential(double rate) { return JumpLaw(ExponentialJump{rate}); }
    static JumpLaw lomax(double shape, double scale) { return JumpLaw(LomaxJump{shape, scale}); }
    static JumpLaw deterministic(double size) { return JumpLaw(DeterministicJump{size}); }

    const Variant& law() const { return law_; }

    double mean() const;

    // P(Y > x)
    double tail(double x) const;

    // E[exp(-beta Y)], beta >= 0
    double laplace(double beta) const;

    // 1 - E[exp(-beta Y)], cancellation-free as beta -> 0.
    double one_minus_laplace(double beta) const;

    // E[e^{-beta Y} - 1 + beta Y] (the compensated-jump exponent), again
    // cancellation-free: the value is O(beta^2) while each term is O(beta).
    double compensated_exponent(double beta) const;

    // Analytic continuation of the transform to the cut plane (contour inversion).
    std::complex<double> laplace(std::complex<double> z) const;

    // E[Y exp(-beta Y)] = -d/dbeta laplace(beta)
    double laplace_neg_derivative(double beta) const;

    // CDF of the stationary-excess (integrated tail) law of Y:
    // (1/mean) * int_0^x P(Y > u) du.
    double integrated_tail_cdf(double x) const;

    double sample(rng::Philox4x32& gen) const;

private:
    void validate() const;

    Variant law_;
};

} // namespace ruinwerk
