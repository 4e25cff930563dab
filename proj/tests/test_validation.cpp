#include <doctest.h>

#include <cmath>
#include <vector>

#include "ruinwerk/rng.hpp"
#include "ruinwerk/stats.hpp"
#include "ruinwerk/validation.hpp"

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

// Synthetic ladder records with a prescribed epoch-count sampler and laws.
std::vector<sim::LadderRecord> synthetic_records(std::size_t n, double rho,
                                                 const std::function<double(rng::Philox4x32&)>& l0,
                                                 const std::function<double(rng::Philox4x32&)>& j,
                                                 std::uint64_t seed = 1) {
    std::vector<sim::LadderRecord> out(n);
    for (std::size_t p = 0; p < n; ++p) {
        rng::Philox4x32 gen(seed, p, 0);
        auto& r = out[p];
        std::size_t count = 0;
        while (gen.uniform() < rho) ++count; // geometric(1-rho)
        double t = 0.0;
        double sup = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            t += 0.5 + gen.uniform();
            r.sigma_times.push_back(t);
            const double li = i == 0 ? l0(gen) : 0.2 * l0(gen);
            const double ji = j(gen);
            r.pre_suprema.push_back(li);
            r.overshoots.push_back(ji);
            sup += li + ji;
        }
        const double l_last = count == 0 ? l0(gen) : 0.2 * l0(gen);
        r.pre_suprema.push_back(l_last);
        sup += l_last;
        r.sup_final = sup;
        r.terminal = sup - 3.0;
    }
    return out;
}

double exp_sample(rng::Philox4x32& gen, double rate) { return -std::log(gen.uniform()) / rate; }

} // namespace

TEST_CASE("kolmogorov distribution critical values match the classical table") {
    CHECK(stats::kolmogorov_critical(0.10) == doctest::Approx(1.2238).epsilon(2e-3));
    CHECK(stats::kolmogorov_critical(0.05) == doctest::Approx(1.3581).epsilon(2e-3));
    CHECK(stats::kolmogorov_critical(0.01) == doctest::Approx(1.6276).epsilon(2e-3));
    CHECK(stats::kolmogorov_q(stats::kolmogorov_critical(0.01)) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("chi-square helper matches the 99th percentile at 9 dof") {
    // About 21.666; the independence check threshold.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (stats::chi_square_p_value(mid, 9) > 0.01) lo = mid;
        else hi = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(21.666).epsilon(1e-3));
}

TEST_CASE("one-sample KS accepts the true law and rejects a wrong one") {
    rng::Philox4x32 gen(123, 0, 0);
    std::vector<double> sample(5000);
    for (auto& x : sample) x = exp_sample(gen, 1.0);
    const auto good = stats::ks_one_sample(sample, [](double x) { return -std::expm1(-x); });
    CHECK(good.p_value > 0.01);
    const auto bad = stats::ks_one_sample(sample, [](double x) { return -std::expm1(-1.5 * x); });
    CHECK(bad.p_value < 0.001);
}

TEST_CASE("two-sample KS behaves symmetrically") {
    rng::Philox4x32 gen(321, 0, 0);
    std::vector<double> a(4000), b(4000), c(4000);
    for (auto& x : a) x = exp_sample(gen, 1.0);
    for (auto& x : b) x = exp_sample(gen, 1.0);
    for (auto& x : c) x = exp_sample(gen, 1.3);
    CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
    CHECK(stats::ks_two_sample(a, c).p_value < 0.001);
}

TEST_CASE("check_rho passes at the true rate and fails an all-zero battery") {
    const auto model = m1(); // rho = 1/2
    rng::Philox4x32 dummy(5, 0, 0);
    auto records = synthetic_records(
        20000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); });
    CHECK(validation::check_rho(records, model).pass);

    for (auto& r : records) {
        r.sigma_times.clear();
        r.overshoots.clear();
        r.pre_suprema.assign(1, 0.0);
        r.sup_final = 0.0;
    }
    const auto rep = validation::check_rho(records, model);
    CHECK_FALSE(rep.pass);
    (void)dummy;
}

TEST_CASE("check_rho and ladder count at rho = 1/4") {
    const RiskModel model(4.0, ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)),
                          PerturbationModel::none());
    const auto records = synthetic_records(
        20000, 0.25, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 17);
    CHECK(validation::check_rho(records, model).pass);
    // mean N target is rho/(1-rho) = 1/3 here.
    const auto count = validation::check_ladder_count(records, model);
    CHECK(count.pass);
    CHECK(count.notes.find("target=0.333333") != std::string::npos);
}

TEST_CASE("overshoot law: correct law passes, raw deterministic jumps fail") {
    const auto model_exp = m1(); // H = Exp(1)
    auto records = synthetic_records(
        4000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 23);
    CHECK(validation::check_overshoot_law(records, model_exp).pass);

    // Deterministic(1) jumps: H is uniform on [0,1]; genuine overshoots are
    // uniform and pass, raw jump sizes (all exactly 1) must fail.
    const RiskModel model_det(4.0, ClaimModel::compound_poisson(2.0, JumpLaw::deterministic(1.0)),
                              PerturbationModel::none());
    auto uniform_records = synthetic_records(
        4000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return g.uniform(); }, 29);
    CHECK(validation::check_overshoot_law(uniform_records, model_det).pass);

    auto raw_records = synthetic_records(
        4000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32&) { return 1.0; }, 31);
    CHECK_FALSE(validation::check_overshoot_law(raw_records, model_det).pass);

    // The negative control must also fail for exponential claims when the
    // overshoots are replaced by something that is not H... but raw jumps of
    // an Exp law coincide with H, so that control must PASS there.
    auto raw_exp = synthetic_records(
        4000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 37);
    CHECK(validation::check_overshoot_law(raw_exp, model_exp).pass);
}

TEST_CASE("independence check: independent pairs pass, injected dependence fails, degenerate is vacuous") {
    auto records = synthetic_records(
        6000, 0.9, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 41);
    const auto rep = validation::check_independence(records);
    CHECK(rep.pass);
    CHECK_FALSE(rep.vacuous);

    auto dependent = records;
    for (auto& r : dependent) {
        if (!r.overshoots.empty()) r.overshoots.front() = r.pre_suprema.front() + 0.1;
    }
    CHECK_FALSE(validation::check_independence(dependent).pass);

    auto degenerate = records;
    for (auto& r : degenerate) {
        for (auto& l : r.pre_suprema) l = 0.0;
    }
    const auto vac = validation::check_independence(degenerate);
    CHECK(vac.pass);
    CHECK(vac.vacuous);
}

TEST_CASE("ladder count check accepts the true geometric and rejects a shifted mean") {
    const auto model = m1();
    auto records = synthetic_records(
        20000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 43);
    const auto rep = validation::check_ladder_count(records, model);
    CHECK(rep.pass);

    auto shifted = synthetic_records(
        20000, 0.58, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 47);
    CHECK_FALSE(validation::check_ladder_count(shifted, model).pass);
}

TEST_CASE("pre-supremum check: matched laws pass, Z = 0 is vacuous") {
    rng::Philox4x32 gen(53, 0, 0);
    auto records = synthetic_records(
        8000, 0.5, [](rng::Philox4x32& g) { return exp_sample(g, 2.0); },
        [](rng::Philox4x32& g) { return exp_sample(g, 1.0); }, 53);
    std::vector<double> sup_y(8000);
    for (auto& s : sup_y) s = exp_sample(gen, 2.0);
    const auto rep = validation::check_pre_supremum_law(records, sup_y, m2());
    CHECK(rep.pass);

    const auto vac = validation::check_pre_supremum_law(records, sup_y, m1());
    CHECK(vac.pass);
    CHECK(vac.vacuous);
}

TEST_CASE("geometric GOF helper") {
    rng::Philox4x32 gen(59, 0, 0);
    std::vector<std::size_t> counts(30000);
    for (auto& c : counts) {
        std::size_t k = 0;
        while (gen.uniform() < 0.5) ++k;
        c = k;
    }
    CHECK(stats::chi_square_geometric_gof(counts, 0.5).p_value > 0.01);
    CHECK(stats::chi_square_geometric_gof(counts, 0.45).p_value < 1e-4);
}

TEST_CASE("full battery on a small M2 run passes and is reproducible") {
    const auto model = m2();
    sim::PathConfig cfg;
    cfg.horizon = 40.0;
    cfg.dt = 5e-3;
    cfg.n_paths = 6000;
    cfg.seed = 7;
    validation::BatteryOptions options;
    options.occupation_x = {0.5, 1.0};
    options.occupation_y = 8.0;
    options.ruin_levels = {1.0};
    const auto reports = validation::run_battery(model, cfg, options);
    for (const auto& r : reports) {
        INFO(r.name, ": stat=", r.statistic, " thr=", r.threshold, " p=", r.p_value, " ", r.notes);
        CHECK(r.pass);
    }
    const auto again = validation::run_battery(model, cfg, options);
    CHECK(validation::reports_to_json(reports) == validation::reports_to_json(again));
}

TEST_CASE("full battery on a stable-perturbation model passes") {
    // Heavy-tailed G: a share of the ladder epochs falls beyond any finite
    // horizon, so the epoch-count checks carry a stated truncation allowance,
    // the geometric GOF is skipped with a note, and sup_Y inside the battery
    // runs on a level-matched horizon so the two-sample biases cancel.
    const RiskModel model(1.0, ClaimModel::compound_poisson(0.5, JumpLaw::exponential(1.0)),
                          PerturbationModel::stable(1.5, 1.0));
    sim::PathConfig cfg;
    cfg.horizon = 40.0 / model.drift();
    cfg.dt = 3e-3;
    cfg.n_paths = 4800; // rho = 1/2, and the independence check needs 2000 pairs
    cfg.seed = 21;
    validation::BatteryOptions options;
    options.occupation_x = {0.5, 1.0};
    options.occupation_y = 8.0;
    options.ruin_levels = {}; // the analytic-ruin comparison is covered on M1/M2
    const auto reports = validation::run_battery(model, cfg, options);
    bool gof_note_seen = false;
    for (const auto& r : reports) {
        INFO(r.name, ": stat=", r.statistic, " thr=", r.threshold, " p=", r.p_value, " ", r.notes);
        CHECK(r.pass);
        if (r.name == "ladder_count_geometric") {
            gof_note_seen = r.notes.find("GOF skipped") != std::string::npos;
        }
    }
    CHECK(gof_note_seen);
}

TEST_CASE("full battery on a compensated-compound-Poisson perturbation passes") {
    // Finite-activity Z: everything is event-driven and exact; G has an atom
    // at 0, which the independence binning must tolerate.
    const RiskModel model(2.0, ClaimModel::compound_poisson(1.0, JumpLaw::exponential(1.0)),
                          PerturbationModel(0.0, std::nullopt,
                                            CompensatedPoissonComponent{1.0, JumpLaw::exponential(2.0)}));
    sim::PathConfig cfg;
    cfg.horizon = 40.0;
    cfg.dt = 1.0; // no continuous components; the grid is idle
    cfg.n_paths = 6000;
    cfg.seed = 33;
    validation::BatteryOptions options;
    options.occupation_x = {0.5, 1.0};
    options.occupation_y = 8.0;
    options.ruin_levels = {1.0};
    const auto reports = validation::run_battery(model, cfg, options);
    for (const auto& r : reports) {
        INFO(r.name, ": stat=", r.statistic, " thr=", r.threshold, " p=", r.p_value, " ", r.notes);
        CHECK(r.pass);
    }
}

TEST_CASE("battery negative control fails the independence check") {
    const auto model = m2();
    sim::PathConfig cfg;
    cfg.horizon = 30.0;
    cfg.dt = 5e-3;
    cfg.n_paths = 5000;
    cfg.seed = 7;
    validation::BatteryOptions options;
    options.inject_dependence = true;
    options.ruin_levels = {};
    const auto reports = validation::run_battery(model, cfg, options);
    bool independence_failed = false;
    for (const auto& r : reports) {
        if (r.name == "independence_L0_J1") independence_failed = !r.pass;
    }
    CHECK(independence_failed);
    CHECK_FALSE(validation::all_passed(reports));
}
