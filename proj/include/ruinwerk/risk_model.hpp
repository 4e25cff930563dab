#pragma once

#include "ruinwerk/claims.hpp"
#include "ruinwerk/perturbation.hpp"

namespace ruinwerk {

// The perturbed risk process X(t) = c t - C(t) + Z(t). Immutable after
// construction; the net profit condition c > EC(1) is enforced here, so
// every instance has drift d > 0 and load rho in (0,1).
class RiskModel {
public:
    RiskModel(double premium_rate, ClaimModel claims, PerturbationModel perturbation);

    double premium_rate() const { return premium_rate_; }
    const ClaimModel& claims() const { return claims_; }
    const PerturbationModel& perturbation() const { return perturbation_; }

    // d = c - EC(1) > 0: the mean drift of X (and the ladder killing rate).
    double drift() const { return drift_; }

    // rho = EC(1) / c in (0, 1).
    double rho() const { return rho_; }

    // psi(beta) = c beta - Phi_C(beta) + psi_Z(beta); strictly increasing on
    // [0, inf) with psi(0) = 0 and psi'(0+) = d.
    double exponent(double beta) const;

    // Analytic continuation to the plane cut along the negative real axis.
    std::complex<double> exponent(std::complex<double> z) const;

    // Whether all transform singularities sit near the negative real axis, so
    // contour (Talbot) inversion is valid. Deterministic jump components put
    // pole lattices of exp(-a s) arbitrarily close to the imaginary axis and
    // are excluded.
    bool contour_invertible() const;

    double exponent_derivative(double beta) const;

    // The inverse Phi of psi: the unique beta >= 0 with psi(beta) = q.
    // Bracketing bisection/secant hybrid; throws on non-convergence.
    double exponent_inverse(double q) const;

private:
    double premium_rate_;
    ClaimModel claims_;
    PerturbationModel perturbation_;
    double drift_;
    double rho_;
};

} // namespace ruinwerk
