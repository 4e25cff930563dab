#include "ruinwerk/risk_model.hpp"

#include <cmath>
#include <sstream>

namespace ruinwerk {

RiskModel::RiskModel(double premium_rate, ClaimModel claims, PerturbationModel perturbation)
    : premium_rate_(premium_rate), claims_(std::move(claims)), perturbation_(std::move(perturbation)) {
    if (!(premium_rate_ > 0.0)) throw std::invalid_argument("risk model: premium rate must be > 0");
    const double mean_claims = claims_.mean_rate();
    if (!(premium_rate_ > mean_claims)) {
        std::ostringstream msg;
        msg << "risk model: net profit condition violated: premium rate " << premium_rate_
            << " must exceed EC(1) = " << mean_claims;
        throw std::invalid_argument(msg.str());
    }
    drift_ = premium_rate_ - mean_claims;
    rho_ = mean_claims / premium_rate_;
}

double RiskModel::exponent(double beta) const {
    if (beta < 0.0) throw std::domain_error("risk exponent: beta must be >= 0");
    return premium_rate_ * beta - claims_.exponent(beta) + perturbation_.exponent(beta);
}

std::complex<double> RiskModel::exponent(std::complex<double> z) const {
    return premium_rate_ * z - claims_.exponent(z) + perturbation_.exponent(z);
}

bool RiskModel::contour_invertible() const {
    auto jump_ok = [](const JumpLaw& law) {
        return !std::holds_alternative<DeterministicJump>(law.law());
    };
    if (claims_.is_compound_poisson() && !jump_ok(claims_.as_compound_poisson().jump)) return false;
    if (perturbation_.ccp_part() && !jump_ok(perturbation_.ccp_part()->jump)) return false;
    return true;
}

double RiskModel::exponent_derivative(double beta) const {
    return premium_rate_ - claims_.exponent_derivative(beta) + perturbation_.exponent_derivative(beta);
}

double RiskModel::exponent_inverse(double q) const {
    if (q < 0.0) throw std::domain_error("exponent inverse: q must be >= 0");
    if (q == 0.0) return 0.0;

    // Grow the bracket by doubling; psi is strictly increasing, so this is safe.
    double hi = 1.0;
    while (exponent(hi) < q) {
        hi *= 2.0;
        if (hi > 1e150) throw std::runtime_error("exponent inverse: bracket growth failed");
    }
    double lo = hi * 0.5 < 1.0 ? 0.0 : hi * 0.5;
    double f_lo = exponent(lo) - q;
    double f_hi = exponent(hi) - q;

    constexpr double rtol = 1e-12;
    for (int iter = 0; iter < 200; ++iter) {
        // Secant proposal on odd iterations, accepted only if it lands strictly
        // inside the bracket; plain bisection otherwise, so the bracket width
        // is guaranteed to shrink geometrically.
        double mid = 0.5 * (lo + hi);
        if ((iter & 1) && f_hi != f_lo) {
            const double sec = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if (sec > lo && sec < hi) mid = sec;
        }
        const double f_mid = exponent(mid) - q;
        if (f_mid == 0.0 || hi - lo < rtol * (1.0 + mid)) {
            return mid;
        }
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    throw std::runtime_error("exponent inverse: root finder failed to converge");
}

} // namespace ruinwerk
