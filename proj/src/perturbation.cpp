#include "ruinwerk/perturbation.hpp"

namespace ruinwerk {

PerturbationModel::PerturbationModel(double gaussian_var,
                                     std::optional<StableComponent> stable,
                                     std::optional<CompensatedPoissonComponent> ccp)
    : gaussian_var_(gaussian_var), stable_(std::move(stable)), ccp_(std::move(ccp)) {
    if (!(gaussian_var_ >= 0.0)) throw std::invalid_argument("perturbation: gaussian variance must be >= 0");
    if (stable_) {
        if (!(stable_->alpha > 1.0 && stable_->alpha < 2.0))
            throw std::invalid_argument("perturbation: stable alpha must lie in (1, 2)");
        if (!(stable_->scale > 0.0)) throw std::invalid_argument("perturbation: stable scale must be > 0");
    }
    if (ccp_ && !(ccp_->rate > 0.0))
        throw std::invalid_argument("perturbation: compensated poisson rate must be > 0");
}

double PerturbationModel::exponent(double beta) const {
    if (beta < 0.0) throw std::domain_error("perturbation exponent: beta must be >= 0");
    if (beta == 0.0) return 0.0;
    double v = 0.5 * gaussian_var_ * beta * beta;
    if (stable_) v += stable_->scale * std::pow(beta, stable_->alpha);
    if (ccp_) {
        // jumps are -Y, compensated: rate * E[e^{-beta Y} - 1 + beta Y]
        v += ccp_->rate * ccp_->jump.compensated_exponent(beta);
    }
    return v;
}

std::complex<double> PerturbationModel::exponent(std::complex<double> z) const {
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        throw std::domain_error("perturbation exponent: z must lie off the negative real axis");
    }
    std::complex<double> v = 0.5 * gaussian_var_ * z * z;
    if (stable_) v += stable_->scale * std::pow(z, stable_->alpha);
    if (ccp_) v += ccp_->rate * (ccp_->jump.laplace(z) - 1.0 + z * ccp_->jump.mean());
    return v;
}

double PerturbationModel::exponent_derivative(double beta) const {
    if (beta < 0.0) throw std::domain_error("perturbation exponent: beta must be >= 0");
    double v = gaussian_var_ * beta;
    if (stable_ && beta > 0.0) v += stable_->scale * stable_->alpha * std::pow(beta, stable_->alpha - 1.0);
    if (ccp_) v += ccp_->rate * (ccp_->jump.mean() - ccp_->jump.laplace_neg_derivative(beta));
    return v;
}

} // namespace ruinwerk
