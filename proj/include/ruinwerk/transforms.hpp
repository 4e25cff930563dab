#pragma once

#include <complex>
#include <functional>

#include "ruinwerk/risk_model.hpp"

namespace ruinwerk::transforms {

// An evaluatable Laplace-domain object, tagged with which analytic quantity
// it represents. All transforms here are defined and finite for beta > 0.
// When the object extends analytically to Re z > 0 with singularities near
// the negative real axis, `complex_eval` carries the continuation and
// enables contour inversion.
struct TransformFn {
    enum class Kind { laplace_H, laplace_G, survival, generic };

    Kind kind = Kind::generic;
    std::function<double(double)> eval;
    std::function<std::complex<double>(std::complex<double>)> complex_eval;

    double operator()(double beta) const { return eval(beta); }
};

// Laplace-Stieltjes transform of the integrated tail H:
// LH(beta) = Phi_C(beta) / (EC(1) * beta); LH(0+) = 1.
double laplace_H(const RiskModel& model, double beta);

// LG(beta) = c beta / psi_Y(beta) with psi_Y(beta) = c beta + psi_Z(beta);
// the transform of the law of sup(-ct - Z(t)). Identically 1 when Z = 0.
double laplace_G(const RiskModel& model, double beta);

// Ordinary Laplace transform of the survival function: d / psi(beta).
double laplace_survival(const RiskModel& model, double beta);

// Ladder height exponent kappa(beta) = psi(beta)/beta; kappa(0+) = d.
double ladder_exponent(const RiskModel& model, double beta);

// Bivariate ladder exponent kappa(a, beta) = (a - psi(beta)) / (Phi(a) - beta)
// with normalization k = 1; the removable singularity at beta = Phi(a) is
// evaluated as the analytic limit psi'(beta).
double bivariate_ladder_exponent(const RiskModel& model, double a, double beta);

TransformFn survival_transform(const RiskModel& model);
TransformFn laplace_G_transform(const RiskModel& model);
TransformFn laplace_H_transform(const RiskModel& model);

// Numerical inversion at x > 0. `order` must be an even integer in [4, 20].
// Transforms carrying a complex continuation are inverted on a fixed Talbot
// contour with 2*order nodes (~1e-10 absolute on smooth originals at the
// default order); otherwise the real-axis Gaver-Stehfest sum of the same
// order is used (~1e-4 absolute at order 14: double-precision evaluations
// cap what any real-abscissa method can resolve). Throws if the transform
// evaluates to a non-finite value.
double invert_laplace(const TransformFn& f, double x, int order = 14);

// The real-axis family member, directly: Gaver-Stehfest at the given order.
// Kept public as the second, independent inversion family for cross-checks.
double invert_laplace_stehfest(const TransformFn& f, double x, int order = 14);

// Tail of the Mittag-Leffler law: 1 - G(x) = sum_n (-c x^{alpha-1})^n / Gamma(1 + (alpha-1) n),
// by direct summation with an alternating-series truncation bound <= 1e-10.
// Throws std::domain_error when the largest term exceeds 1e12 (cancellation
// would destroy the result).
double mittag_leffler_tail(double c, double alpha, double x);

// G(x) = P(sup_t(-ct - Z(t)) <= x), x >= 0. Dispatch: Z = 0 -> unit step at 0;
// pure Brownian -> 1 - exp(-(2c/sigma^2) x); pure stable -> Mittag-Leffler;
// otherwise numerical inversion of LG(beta)/beta.
double G_cdf(const RiskModel& model, double x);

// Mass of G at 0 (positive only when Z is pure compensated-compound-Poisson).
double G_atom_at_zero(const RiskModel& model);

} // namespace ruinwerk::transforms
