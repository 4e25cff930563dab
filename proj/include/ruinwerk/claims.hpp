#pragma once

#include <variant>

#include "ruinwerk/jump_law.hpp"

namespace ruinwerk {

// Cumulative claims are a driftless subordinator with finite mean.
struct CompoundPoissonClaims {
    double rate; // claim arrivals per unit time
    JumpLaw jump;
};

struct GammaProcessClaims {
    double shape; // a, per unit time
    double rate;  // b, per unit size
};

class ClaimModel {
public:
    using Variant = std::variant<CompoundPoissonClaims, GammaProcessClaims>;

    explicit ClaimModel(Variant v);

    static ClaimModel compound_poisson(double rate, JumpLaw jump) {
        return ClaimModel(CompoundPoissonClaims{rate, std::move(jump)});
    }
    static ClaimModel gamma_process(double shape, double rate) {
        return ClaimModel(GammaProcessClaims{shape, rate});
    }

    const Variant& variant() const { return claims_; }
    bool is_compound_poisson() const { return std::holds_alternative<CompoundPoissonClaims>(claims_); }
    const CompoundPoissonClaims& as_compound_poisson() const { return std::get<CompoundPoissonClaims>(claims_); }
    const GammaProcessClaims& as_gamma() const { return std::get<GammaProcessClaims>(claims_); }

    // Laplace exponent Phi_C(beta) = int (1 - e^{-beta x}) nu(dx), beta >= 0.
    double exponent(double beta) const;

    // Analytic continuation to the plane cut along the negative real axis.
    std::complex<double> exponent(std::complex<double> z) const;

    // Phi_C'(beta); Phi_C'(0+) = EC(1).
    double exponent_derivative(double beta) const;

    // EC(1) = int x nu(dx), in closed form per variant.
    double mean_rate() const;

    // Levy tail nu(x, inf), x > 0.
    double levy_tail(double x) const;

    // Integrated tail distribution H(x) = (1/EC(1)) int_0^x nu(y, inf) dy.
    double integrated_tail_cdf(double x) const;

private:
    Variant claims_;
};

} // namespace ruinwerk
