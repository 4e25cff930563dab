#include "ruinwerk/rng.hpp"

#include <stdexcept>

namespace ruinwerk::rng {

double gamma(Philox4x32& gen, GaussianSampler& gauss, double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) {
        throw std::invalid_argument("gamma sampler requires positive shape and scale");
    }
    if (shape < 1.0) {
        // Gamma(s) = Gamma(s+1) * U^{1/s}
        const double g = gamma(gen, gauss, shape + 1.0, 1.0);
        return scale * g * std::pow(gen.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = gauss(gen);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = gen.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

double stable_increment(Philox4x32& gen, double alpha, double scale_q, double dt) {
    // S1-parametrization CMS with skew -1. The per-increment scale sigma
    // satisfies sigma^alpha = scale_q * |cos(pi alpha / 2)| * dt, which gives
    // the Laplace exponent scale_q * beta^alpha per unit time.
    const double half_pi = 0.5 * M_PI;
    const double tan_term = std::tan(half_pi * alpha); // negative for alpha in (1,2)
    const double b = std::atan(-tan_term) / alpha;
    const double s_factor = std::pow(1.0 + tan_term * tan_term, 0.5 / alpha);
    const double sigma = std::pow(scale_q * std::abs(std::cos(half_pi * alpha)) * dt, 1.0 / alpha);

    const double u = M_PI * (gen.uniform() - 0.5); // Uniform(-pi/2, pi/2)
    const double w = -std::log(gen.uniform());     // Exp(1)
    const double x = s_factor * std::sin(alpha * (u + b)) / std::pow(std::cos(u), 1.0 / alpha) *
                     std::pow(std::cos(u - alpha * (u + b)) / w, (1.0 - alpha) / alpha);
    return sigma * x;
}

} // namespace ruinwerk::rng
