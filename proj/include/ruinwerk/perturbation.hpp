#pragma once

#include <optional>

#include "ruinwerk/jump_law.hpp"

namespace ruinwerk {

// Spectrally negative alpha-stable component with Laplace-exponent
// contribution scale * beta^alpha.
struct StableComponent {
    double alpha; // in (1, 2)
    double scale; // q > 0
};

// Compensated compound Poisson component: downward jumps with the given
// magnitude law plus drift rate*mean(jump), so the component has zero mean.
struct CompensatedPoissonComponent {
    double rate;
    JumpLaw jump;
};

// Zero-mean spectrally negative perturbation Z. Any subset of the three
// components may be present, including none (Z identically zero).
class PerturbationModel {
public:
    PerturbationModel() = default;
    PerturbationModel(double gaussian_var,
                      std::optional<StableComponent> stable,
                      std::optional<CompensatedPoissonComponent> ccp);

    static PerturbationModel none() { return PerturbationModel(); }
    static PerturbationModel brownian(double gaussian_var) {
        return PerturbationModel(gaussian_var, std::nullopt, std::nullopt);
    }
    static PerturbationModel stable(double alpha, double scale) {
        return PerturbationModel(0.0, StableComponent{alpha, scale}, std::nullopt);
    }

    double gaussian_var() const { return gaussian_var_; }
    const std::optional<StableComponent>& stable_part() const { return stable_; }
    const std::optional<CompensatedPoissonComponent>& ccp_part() const { return ccp_; }

    bool is_zero() const { return gaussian_var_ == 0.0 && !stable_ && !ccp_; }
    bool has_unbounded_variation() const { return gaussian_var_ > 0.0 || stable_.has_value(); }

    // psi_Z(beta) = (sigma^2/2) beta^2 + q beta^alpha + rate*(LY(beta) - 1 + beta*mean)
    double exponent(double beta) const;

    // Analytic continuation to the cut plane (principal branch for the stable term).
    std::complex<double> exponent(std::complex<double> z) const;

    // psi_Z'(beta); psi_Z'(0+) = 0 (zero-mean contract).
    double exponent_derivative(double beta) const;

private:
    double gaussian_var_ = 0.0;
    std::optional<StableComponent> stable_;
    std::optional<CompensatedPoissonComponent> ccp_;
};

} // namespace ruinwerk
