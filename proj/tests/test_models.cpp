#include <doctest.h>

#include <cmath>
#include <vector>

#include "ruinwerk/claims.hpp"
#include "ruinwerk/perturbation.hpp"
#include "ruinwerk/risk_model.hpp"
#include "ruinwerk/rng.hpp"
#include "support/oracles.hpp"

using namespace ruinwerk;

namespace {

RiskModel m1() {
    return RiskModel(2.0, ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)),
                     PerturbationModel::none());
}

RiskModel m2() {
    return RiskModel(2.0, ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)),
                     PerturbationModel::brownian(2.0));
}

} // namespace

TEST_CASE("claim exponent closed forms") {
    const auto cp = ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0));
    CHECK(cp.exponent(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cp.exponent(0.0) == 0.0);
    const auto gp = ClaimModel::gamma_process(1.0, 1.0);
    CHECK(gp.exponent(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(gp.exponent(0.0) == 0.0);
}

TEST_CASE("claim exponent agrees with adaptive quadrature for every variant") {
    const std::vector<ClaimModel> variants{
        ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)),
        ClaimModel::compound_poisson(2.0, JumpLaw::exponential(0.5)),
        ClaimModel::compound_poisson(1.5, JumpLaw::lomax(2.5, 1.0)),
        ClaimModel::compound_poisson(1.0, JumpLaw::lomax(1.3, 0.7)),
        ClaimModel::compound_poisson(1.0, JumpLaw::lomax(2.0, 2.0)),
        ClaimModel::compound_poisson(1.0, JumpLaw::lomax(4.0, 1.5)),
        ClaimModel::compound_poisson(0.7, JumpLaw::deterministic(1.5)),
        ClaimModel::gamma_process(1.0, 1.0),
        ClaimModel::gamma_process(2.0, 3.0),
    };
    for (const auto& claims : variants) {
        for (double beta = 0.1; beta <= 10.0; beta *= 1.7) {
            const double closed = claims.exponent(beta);
            const double quad = oracles::claim_exponent_quadrature(claims, beta);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
        }
    }
}

TEST_CASE("lomax transform stays accurate across all evaluation branches") {
    const auto claims = ClaimModel::compound_poisson(1.0, JumpLaw::lomax(2.5, 1.0));
    // Phi_C(beta) -> rate as beta -> inf for compound Poisson.
    const double v = claims.exponent(5e4);
    CHECK(v > 0.999);
    CHECK(v <= 1.0);
    // Quadrature agreement right around the series/fraction/asymptotic seams
    // (z = 0.02 and z = 50) and deep in each branch.
    for (const double beta : {1e-4, 0.019, 0.021, 0.3, 49.9, 50.1, 200.0}) {
        CHECK(claims.exponent(beta) ==
              doctest::Approx(oracles::claim_exponent_quadrature(claims, beta)).epsilon(1e-9));
    }
    // Integer and near-integer shapes exercise the E1-limit of the series.
    for (const double shape : {2.0, 3.0, 2.0 + 1e-12}) {
        const auto c2 = ClaimModel::compound_poisson(1.0, JumpLaw::lomax(shape, 1.0));
        for (const double beta : {1e-3, 0.5, 5.0}) {
            CHECK(c2.exponent(beta) ==
                  doctest::Approx(oracles::claim_exponent_quadrature(c2, beta)).epsilon(1e-9));
        }
    }
}

TEST_CASE("claim mean closed forms") {
    CHECK(ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)).mean_rate() == 1.0);
    CHECK(ClaimModel::compound_poisson(2.0, JumpLaw::deterministic(0.5)).mean_rate() == 1.0);
    CHECK(ClaimModel::gamma_process(3.0, 2.0).mean_rate() == doctest::Approx(1.5));
    CHECK(ClaimModel::compound_poisson(1.0, JumpLaw::lomax(3.0, 4.0)).mean_rate() ==
          doctest::Approx(2.0));
}

TEST_CASE("claim mean is the small-beta limit of the exponent") {
    const std::vector<ClaimModel> variants{
        ClaimModel::compound_poisson(1.0, JumpLaw::exponential(2.0)),
        ClaimModel::compound_poisson(1.0, JumpLaw::lomax(2.5, 1.0)),
        ClaimModel::compound_poisson(3.0, JumpLaw::deterministic(0.25)),
        ClaimModel::gamma_process(2.0, 5.0),
    };
    for (const auto& claims : variants) {
        const double beta = 1e-6;
        CHECK(claims.exponent(beta) / beta == doctest::Approx(claims.mean_rate()).epsilon(1e-5));
    }
}

TEST_CASE("levy tail examples") {
    CHECK(ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)).levy_tail(1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(ClaimModel::compound_poisson(1.0, JumpLaw::deterministic(2.0)).levy_tail(3.0) == 0.0);
    const auto gp = ClaimModel::gamma_process(1.0, 1.0);
    CHECK(gp.levy_tail(1.0) ==
          doctest::Approx(oracles::gamma_levy_tail_quadrature(1.0, 1.0, 1.0)).epsilon(1e-10));
    CHECK(gp.levy_tail(1.0) == doctest::Approx(0.2193839343955203).epsilon(1e-12));
    // nonincreasing
    double prev = gp.levy_tail(0.01);
    for (double x = 0.1; x < 20.0; x *= 2.0) {
        const double v = gp.levy_tail(x);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("integrated tail examples and quadrature agreement") {
    const auto cp = ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0));
    CHECK(cp.integrated_tail_cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(cp.integrated_tail_cdf(0.0) == 0.0);

    const auto gp = ClaimModel::gamma_process(1.0, 1.0);
    CHECK(gp.integrated_tail_cdf(1.0) ==
          doctest::Approx(0.2193839343955203 + 1.0 - std::exp(-1.0)).epsilon(1e-10));
    for (const auto& claims :
         {cp, gp, ClaimModel::compound_poisson(1.0, JumpLaw::lomax(2.5, 1.0)),
          ClaimModel::compound_poisson(2.0, JumpLaw::deterministic(1.0))}) {
        for (const double x : {0.3, 1.0, 4.0}) {
            CHECK(claims.integrated_tail_cdf(x) ==
                  doctest::Approx(oracles::integrated_tail_quadrature(claims, x)).epsilon(1e-8));
        }
    }
    // H is a CDF: nondecreasing toward 1.
    CHECK(gp.integrated_tail_cdf(50.0) > 0.999);
    CHECK(gp.integrated_tail_cdf(50.0) <= 1.0);
}

TEST_CASE("perturbation exponent examples") {
    CHECK(PerturbationModel::brownian(2.0).exponent(1.0) == doctest::Approx(1.0));
    CHECK(PerturbationModel::none().exponent(3.7) == 0.0);
    CHECK(PerturbationModel::stable(1.5, 1.0).exponent(4.0) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("perturbation zero-mean contract") {
    const double eps = 1e-6;
    // Brownian and compensated-Poisson parts vanish linearly.
    CHECK(std::abs(PerturbationModel::brownian(2.0).exponent(eps) / eps) <= 1e-5);
    const PerturbationModel ccp(0.0, std::nullopt,
                                CompensatedPoissonComponent{1.5, JumpLaw::exponential(2.0)});
    CHECK(std::abs(ccp.exponent(eps) / eps) <= 1e-5);
    // The stable part vanishes at the exact rate q eps^{alpha-1}.
    for (const double alpha : {1.2, 1.5, 1.9}) {
        const PerturbationModel st = PerturbationModel::stable(alpha, 1.0);
        const double expected_rate = std::pow(eps, alpha - 1.0);
        CHECK(st.exponent(eps) / eps == doctest::Approx(expected_rate).epsilon(1e-9));
        CHECK(st.exponent(eps * 0.01) / (eps * 0.01) < expected_rate); // still vanishing
    }
    // psi_Z(0) = 0 and convexity on a grid.
    const PerturbationModel mix(1.0, StableComponent{1.5, 0.5},
                                CompensatedPoissonComponent{1.0, JumpLaw::exponential(1.0)});
    CHECK(mix.exponent(0.0) == 0.0);
    double prev_slope = -1.0;
    for (double b = 0.25; b < 16.0; b *= 2.0) {
        const double slope = (mix.exponent(b + 1e-5) - mix.exponent(b)) / 1e-5;
        CHECK(slope >= prev_slope);
        prev_slope = slope;
    }
}

TEST_CASE("risk exponent examples and monotonicity") {
    const auto model1 = m1();
    CHECK(model1.exponent(1.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(model1.exponent(0.0) == 0.0);
    const auto model2 = m2();
    CHECK(model2.exponent(1.0) == doctest::Approx(2.5).epsilon(1e-12));

    rng::Philox4x32 gen(11, 0, 0);
    for (const auto& model : {model1, model2}) {
        for (int i = 0; i < 100; ++i) {
            const double b1 = 10.0 * gen.uniform();
            const double b2 = b1 + 10.0 * gen.uniform() + 1e-9;
            CHECK(model.exponent(b1) < model.exponent(b2));
        }
    }
}

TEST_CASE("exponent inverse examples and round trip") {
    const auto model1 = m1();
    CHECK(model1.exponent_inverse(1.5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model1.exponent_inverse(0.0) == 0.0);
    const auto model2 = m2();
    CHECK(model2.exponent_inverse(2.5) == doctest::Approx(1.0).epsilon(1e-9));

    const std::vector<RiskModel> models{
        model1, model2,
        RiskModel(1.0, ClaimModel::compound_poisson(0.5, JumpLaw::exponential(1.0)),
                  PerturbationModel::stable(1.5, 1.0)),
        RiskModel(2.0, ClaimModel::gamma_process(1.0, 1.0), PerturbationModel::brownian(2.0)),
        RiskModel(3.0, ClaimModel::compound_poisson(1.0, JumpLaw::lomax(2.5, 1.0)),
                  PerturbationModel(0.5, std::nullopt,
                                    CompensatedPoissonComponent{1.0, JumpLaw::deterministic(0.5)})),
    };
    rng::Philox4x32 gen(13, 0, 0);
    for (const auto& model : models) {
        for (int i = 0; i < 40; ++i) {
            const double beta = 10.0 * gen.uniform();
            const double q = model.exponent(beta);
            CHECK(model.exponent_inverse(q) == doctest::Approx(beta).epsilon(1e-8));
        }
    }
}

TEST_CASE("risk exponent derivative matches finite differences") {
    const std::vector<RiskModel> models{
        m1(), m2(),
        RiskModel(1.0, ClaimModel::compound_poisson(0.5, JumpLaw::exponential(1.0)),
                  PerturbationModel::stable(1.5, 1.0)),
        RiskModel(2.0, ClaimModel::gamma_process(1.0, 1.0), PerturbationModel::none()),
        RiskModel(3.0, ClaimModel::compound_poisson(1.0, JumpLaw::lomax(2.5, 1.0)),
                  PerturbationModel::brownian(1.0)),
    };
    for (const auto& model : models) {
        CHECK(model.exponent_derivative(0.0) == doctest::Approx(model.drift()).epsilon(1e-10));
        for (const double beta : {0.5, 1.0, 3.0}) {
            const double h = 1e-6 * (1.0 + beta);
            const double fd = (model.exponent(beta + h) - model.exponent(beta - h)) / (2.0 * h);
            CHECK(model.exponent_derivative(beta) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("invalid parameters are rejected at construction with precise messages") {
    CHECK_THROWS_AS(JumpLaw::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpLaw::lomax(1.0, 1.0), std::invalid_argument); // infinite mean
    CHECK_THROWS_AS(JumpLaw::lomax(2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpLaw::deterministic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimModel::compound_poisson(0.0, JumpLaw::exponential(1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ClaimModel::gamma_process(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PerturbationModel::stable(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PerturbationModel::stable(1.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PerturbationModel::brownian(-1.0), std::invalid_argument);

    // Net profit violation names the condition.
    try {
        RiskModel(1.0, ClaimModel::compound_poisson(2.0, JumpLaw::exponential(1.0)),
                  PerturbationModel::none());
        FAIL("expected net-profit rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("net profit") != std::string::npos);
    }
}

TEST_CASE("derived quantities d and rho") {
    const auto model = m1();
    CHECK(model.drift() == doctest::Approx(1.0));
    CHECK(model.rho() == doctest::Approx(0.5));
    const RiskModel quarter(4.0, ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)),
                            PerturbationModel::none());
    CHECK(quarter.rho() == doctest::Approx(0.25));
}
