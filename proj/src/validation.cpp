#include "ruinwerk/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ruinwerk/pk_engine.hpp"
#include "ruinwerk/transforms.hpp"

namespace ruinwerk::validation {

namespace {

constexpr double kLevel = 0.01; // per-check significance for KS / chi-square

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::vector<double> first_overshoots(const std::vector<sim::LadderRecord>& records) {
    std::vector<double> out;
    for (const auto& r : records) {
        if (!r.overshoots.empty()) out.push_back(r.overshoots.front());
    }
    return out;
}

// L_0 across all paths; on {sigma = infinity} this is Shat(T).
std::vector<double> first_pre_suprema(const std::vector<sim::LadderRecord>& records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.pre_suprema.front());
    return out;
}

bool essentially_degenerate(const std::vector<double>& xs) {
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    return *mx - *mn < 1e-12;
}

// A stable component gives the supremum law an x^{1-alpha} tail, so a share
// of the ladder epochs falls beyond any finite horizon: the dual process
// keeps resetting its drawdown through single large jumps at all time
// scales. The expected number of post-horizon resets is bounded by the
// integrated jump tail J(T) = int_T^inf nu_Z(d t, inf) dt, in closed form
// from the stable parameters. Mean-type epoch checks widen their tolerance
// by the stated multiple of J; for light-tailed Z the allowance is zero.
double heavy_tail_reset_bound(const RiskModel& model, double horizon) {
    const auto& stable = model.perturbation().stable_part();
    if (!stable) return 0.0;
    const double alpha = stable->alpha;
    // psi_Z = q beta^alpha corresponds to the density a/|x|^{1+alpha} with
    // a = q alpha (alpha-1) / Gamma(2-alpha); the tail is (a/alpha) u^{-alpha}.
    const double a = stable->scale * alpha * (alpha - 1.0) / std::tgamma(2.0 - alpha);
    const double d = model.drift();
    return (a / alpha) * std::pow(d, -alpha) * std::pow(horizon, 1.0 - alpha) / (alpha - 1.0);
}

} // namespace

CheckReport check_rho(const std::vector<sim::LadderRecord>& records, const RiskModel& model,
                      double horizon) {
    if (records.empty()) throw std::invalid_argument("check_rho: empty records");
    std::size_t hits = 0;
    for (const auto& r : records) {
        if (r.epoch_count() > 0) ++hits;
    }
    const double n = static_cast<double>(records.size());
    const double p = static_cast<double>(hits) / n;
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
    const double truncation = 2.0 * model.rho() * heavy_tail_reset_bound(model, horizon);
    CheckReport rep;
    rep.name = "ladder_epoch_probability";
    rep.statistic = std::abs(p - model.rho());
    rep.threshold = 3.0 * se + truncation;
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    rep.pass = rep.statistic <= rep.threshold;
    rep.n = records.size();
    rep.notes = "p_hat=" + fmt(p) + " rho=" + fmt(model.rho()) + " se=" + fmt(se);
    if (truncation > 0.0) rep.notes += " truncation_allowance=" + fmt(truncation);
    return rep;
}

CheckReport check_overshoot_law(const std::vector<sim::LadderRecord>& records, const RiskModel& model) {
    auto j1 = first_overshoots(records);
    if (j1.size() < 500) throw std::invalid_argument("check_overshoot_law: need at least 500 overshoots");
    const auto ks = stats::ks_one_sample(
        std::move(j1), [&model](double x) { return model.claims().integrated_tail_cdf(x); });
    CheckReport rep;
    rep.name = "overshoot_law_vs_integrated_tail";
    rep.statistic = ks.statistic;
    rep.threshold = stats::kolmogorov_critical(kLevel) / std::sqrt(static_cast<double>(ks.n));
    rep.p_value = ks.p_value;
    rep.pass = ks.p_value > kLevel;
    rep.n = ks.n;
    rep.notes = "one-sample KS of J1 against H";
    return rep;
}

CheckReport check_independence(const std::vector<sim::LadderRecord>& records) {
    std::vector<double> l0, j1;
    for (const auto& r : records) {
        if (!r.overshoots.empty()) {
            l0.push_back(r.pre_suprema.front());
            j1.push_back(r.overshoots.front());
        }
    }
    CheckReport rep;
    rep.name = "independence_L0_J1";
    rep.n = l0.size();
    if (l0.size() < 2000) throw std::invalid_argument("check_independence: need at least 2000 pairs");
    if (essentially_degenerate(l0) || essentially_degenerate(j1)) {
        rep.pass = true;
        rep.vacuous = true;
        rep.p_value = std::numeric_limits<double>::quiet_NaN();
        rep.notes = "vacuous: a margin is degenerate (Z = 0 makes L0 a point mass)";
        return rep;
    }
    const auto cs = stats::chi_square_independence(l0, j1);
    if (cs.dof == 0) {
        rep.pass = true;
        rep.vacuous = true;
        rep.p_value = std::numeric_limits<double>::quiet_NaN();
        rep.notes = "vacuous: quartile binning degenerate";
        return rep;
    }
    rep.statistic = cs.statistic;
    rep.threshold = 21.666; // chi2 0.99 quantile, 9 dof
    rep.p_value = cs.p_value;
    rep.pass = cs.p_value > kLevel;
    rep.notes = "4x4 quartile binning, dof=9";
    return rep;
}

CheckReport check_ladder_count(const std::vector<sim::LadderRecord>& records, const RiskModel& model,
                               double horizon) {
    if (records.empty()) throw std::invalid_argument("check_ladder_count: empty records");
    std::vector<double> ns;
    std::vector<std::size_t> counts;
    ns.reserve(records.size());
    counts.reserve(records.size());
    for (const auto& r : records) {
        ns.push_back(static_cast<double>(r.epoch_count()));
        counts.push_back(r.epoch_count());
    }
    const auto mean = stats::sample_mean(ns);
    const double rho = model.rho();
    const double target = rho / (1.0 - rho);
    const double truncation = 2.0 * (1.0 + target) * heavy_tail_reset_bound(model, horizon);
    const bool mean_ok = std::abs(mean.mean - target) <= 3.0 * mean.std_error + truncation;

    CheckReport rep;
    rep.name = "ladder_count_geometric";
    rep.statistic = std::abs(mean.mean - target);
    rep.threshold = 3.0 * mean.std_error + truncation;
    rep.n = records.size();
    rep.notes = "mean N=" + fmt(mean.mean) + " target=" + fmt(target);
    if (truncation > 0.0) {
        // The geometric law for N is an infinite-horizon identity; with a
        // heavy-tailed perturbation the finite-horizon count law genuinely
        // differs, so only the mean (with its stated allowance) is testable.
        rep.p_value = std::numeric_limits<double>::quiet_NaN();
        rep.pass = mean_ok;
        rep.notes += " truncation_allowance=" + fmt(truncation) +
                     "; geometric GOF skipped (finite-horizon law differs under heavy tails)";
        return rep;
    }
    const auto gof = stats::chi_square_geometric_gof(counts, 1.0 - rho);
    rep.p_value = gof.p_value;
    rep.pass = mean_ok && gof.p_value > kLevel;
    rep.notes += " gof_stat=" + fmt(gof.statistic) + " dof=" + fmt(static_cast<double>(gof.dof));
    return rep;
}

CheckReport check_pre_supremum_law(const std::vector<sim::LadderRecord>& records,
                                   const std::vector<double>& sup_y_samples, const RiskModel& model) {
    auto l0 = first_pre_suprema(records);
    CheckReport rep;
    rep.name = "pre_supremum_law";
    rep.n = l0.size();
    if (l0.size() < 2000 || sup_y_samples.size() < 2000) {
        throw std::invalid_argument("check_pre_supremum_law: need at least 2000 samples per side");
    }
    if (model.perturbation().is_zero()) {
        rep.pass = true;
        rep.vacuous = true;
        rep.p_value = std::numeric_limits<double>::quiet_NaN();
        rep.notes = "vacuous: Z = 0, both laws are the point mass at 0";
        return rep;
    }
    const auto two = stats::ks_two_sample(l0, sup_y_samples);
    bool pass = two.p_value > kLevel;
    std::string notes = "two-sample KS D=" + fmt(two.statistic) + " p=" + fmt(two.p_value);

    // The one-sample comparison against the closed-form G is meaningful only
    // when L0 converges to it at desk-scale horizons, i.e. pure Brownian
    // (exponential tails). A stable G has an x^{1-alpha} tail: every finite
    // horizon leaves an O(T^{1-alpha}) gap, so only the two-sample check
    // (whose matching truncation biases cancel) is run there.
    const auto& z = model.perturbation();
    const bool brownian_closed_form =
        !z.ccp_part() && z.gaussian_var() > 0.0 && !z.stable_part().has_value();
    if (brownian_closed_form) {
        const auto one = stats::ks_one_sample(
            l0, [&model](double x) { return transforms::G_cdf(model, x); });
        pass = pass && one.p_value > kLevel;
        notes += "; one-sample KS vs G D=" + fmt(one.statistic) + " p=" + fmt(one.p_value);
        rep.p_value = std::min(two.p_value, one.p_value);
        rep.statistic = std::max(two.statistic, one.statistic);
    } else {
        if (z.stable_part()) notes += "; one-sample vs G omitted (heavy-tailed horizon gap)";
        rep.p_value = two.p_value;
        rep.statistic = two.statistic;
    }
    rep.threshold = kLevel; // on the p-value scale
    rep.pass = pass;
    rep.notes = notes;
    return rep;
}

CheckReport check_occupation(const RiskModel& model, const sim::PathConfig& cfg,
                             const std::vector<double>& xs, double y) {
    const auto samples = sim::occupation_run(model, xs, y, cfg);
    const double d = model.drift();
    const double n = static_cast<double>(samples.size());

    bool pass = true;
    std::ostringstream notes;
    double worst_dev = 0.0, worst_tol = 0.0;
    double slope_num = 0.0, slope_den = 0.0, slope_num_se = 0.0, p_alive = 0.0;
    for (const auto& s : samples) p_alive += s.no_event_by_horizon ? 1.0 : 0.0;
    p_alive /= n;

    // Heavy-tailed perturbations leave sigma/tau_y mass beyond the horizon:
    // paths counted alive at T still accrue both sides of the identity later.
    // The stated per-level allowance bounds that by the expected post-horizon
    // reset count J times the per-window scale x/d.
    const double reset_bound = heavy_tail_reset_bound(model, cfg.horizon);
    if (reset_bound > 0.0) {
        notes << "heavy-tail truncation allowance " << fmt(p_alive * reset_bound) << " * x/d; ";
    }

    for (std::size_t i = 0; i < xs.size(); ++i) {
        // Per-path difference A - B with A the occupation time and
        // B = 1{no event} x/d, so the tolerance respects their correlation.
        double sum = 0.0, sum2 = 0.0, mean_a = 0.0, sum2_a = 0.0;
        for (const auto& s : samples) {
            const double a = s.time_below[i];
            const double b = (s.no_event_by_horizon ? 1.0 : 0.0) * xs[i] / d;
            const double diff = a - b;
            sum += diff;
            sum2 += diff * diff;
            mean_a += a;
            sum2_a += a * a;
        }
        const double mean = sum / n;
        const double se = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n);
        const double tol = 3.0 * se + p_alive * reset_bound * xs[i] / d;
        if (std::abs(mean) > tol) pass = false;
        if (std::abs(mean) - tol > worst_dev - worst_tol) {
            worst_dev = std::abs(mean);
            worst_tol = tol;
        }
        mean_a /= n;
        const double se_a = std::sqrt(std::max(0.0, sum2_a / n - mean_a * mean_a) / n);
        slope_num += mean_a * xs[i];
        slope_num_se += se_a * xs[i];
        slope_den += xs[i] * xs[i];
        notes << "x=" << fmt(xs[i]) << ": dev=" << fmt(mean) << " tol=" << fmt(tol) << "; ";
    }
    // Regression through the origin of the estimates against x should give
    // P(no event) / d within 5% (with a 3-sigma noise floor for small runs;
    // the responses share paths, so the error bound is the conservative sum).
    const double slope = slope_num / slope_den;
    const double slope_target = p_alive / d;
    const double slope_se = slope_num_se / slope_den;
    const bool slope_ok = std::abs(slope - slope_target) <=
                          std::max(0.05 * slope_target, 3.0 * slope_se) + reset_bound * slope_target;
    if (!slope_ok) pass = false;
    notes << "slope=" << fmt(slope) << " target=" << fmt(slope_target);

    CheckReport rep;
    rep.name = "occupation_formula";
    rep.statistic = worst_dev;
    rep.threshold = worst_tol;
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    rep.pass = pass;
    rep.n = samples.size();
    rep.notes = notes.str();
    return rep;
}

CheckReport check_decomposition(const std::vector<sim::LadderRecord>& records) {
    double worst = 0.0;
    for (const auto& r : records) {
        double sum = 0.0;
        for (const double l : r.pre_suprema) sum += l;
        for (const double j : r.overshoots) sum += j;
        worst = std::max(worst, std::abs(sum - r.sup_final));
    }
    CheckReport rep;
    rep.name = "ladder_decomposition_identity";
    rep.statistic = worst;
    rep.threshold = 1e-9;
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    rep.pass = worst <= 1e-9;
    rep.n = records.size();
    rep.notes = "max |sum(L)+sum(J) - sup| over paths";
    return rep;
}

CheckReport check_epoch_ordering(const std::vector<sim::LadderRecord>& records) {
    std::size_t violations = 0;
    for (const auto& r : records) {
        for (std::size_t i = 1; i < r.sigma_times.size(); ++i) {
            if (!(r.sigma_times[i] > r.sigma_times[i - 1])) ++violations;
        }
        if (!r.sigma_times.empty() && !(r.sigma_times.front() > 0.0)) ++violations;
        for (const double j : r.overshoots) {
            if (!(j > 0.0)) ++violations;
        }
        for (const double l : r.pre_suprema) {
            if (l < 0.0) ++violations;
        }
    }
    CheckReport rep;
    rep.name = "epoch_strict_ordering";
    rep.statistic = static_cast<double>(violations);
    rep.threshold = 0.0;
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    rep.pass = violations == 0;
    rep.n = records.size();
    rep.notes = "strictly increasing sigma, positive overshoots, nonnegative L";
    return rep;
}

CheckReport check_duality(const RiskModel& model, const sim::PathConfig& cfg) {
    const auto drawdown = sim::sample_drawdown(model, cfg);
    const auto sup_x = sim::sample_sup_X(model, cfg);
    const auto ks = stats::ks_two_sample(drawdown, sup_x);
    CheckReport rep;
    rep.name = "duality_drawdown_vs_supX";
    rep.statistic = ks.statistic;
    rep.threshold = stats::kolmogorov_critical(kLevel) / std::sqrt(static_cast<double>(ks.n));
    rep.p_value = ks.p_value;
    rep.pass = ks.p_value > kLevel;
    rep.n = ks.n;
    rep.notes = "two-sample KS at t = horizon";
    return rep;
}

CheckReport check_ruin_vs_analytic(const std::vector<sim::SupTerminal>& sups, const RiskModel& model,
                                   const sim::PathConfig& cfg, double x) {
    // Analytic survival curve, extended far enough to evaluate the horizon tail.
    const double x_max = std::max(4.0 * x + 1.0, 2.0 * model.drift() * cfg.horizon);
    const auto theta = pk::pk_survival(model, x_max, x_max / 4096.0, 1e-8);

    const double n = static_cast<double>(sups.size());
    std::size_t hits = 0;
    double tail = 0.0; // mean of (1 - theta(x + X(T))) over surviving paths
    for (const auto& s : sups) {
        if (s.sup > x) {
            ++hits;
        } else {
            const double margin = x - s.terminal; // X(T) = -Xhat(T); level left to fall
            tail += 1.0 - theta.value_at(margin);
        }
    }
    const double p_hat = static_cast<double>(hits) / n;
    const double horizon_tail = tail / n;
    const double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 1e-12) / n);
    const double target = 1.0 - theta.value_at(x);

    CheckReport rep;
    rep.name = "ruin_vs_analytic_x" + fmt(x);
    rep.statistic = std::abs(p_hat + horizon_tail - target);
    rep.threshold = 3.0 * se + 0.5 * horizon_tail;
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    rep.pass = rep.statistic <= rep.threshold;
    rep.n = sups.size();
    rep.notes = "p_hat=" + fmt(p_hat) + " target=" + fmt(target) +
                " horizon_tail=" + fmt(horizon_tail) + " (stated bias)";
    return rep;
}

std::vector<CheckReport> run_battery(const RiskModel& model, const sim::PathConfig& cfg,
                                     const BatteryOptions& options) {
    std::vector<CheckReport> reports;
    auto records = sim::simulate_ladder(model, cfg);

    if (options.inject_dependence) {
        // Negative control: make the first overshoot a deterministic function
        // of L0. The independence check must fail.
        for (auto& r : records) {
            if (!r.overshoots.empty()) r.overshoots.front() = r.pre_suprema.front() + 0.1;
        }
    }

    reports.push_back(check_rho(records, model, cfg.horizon));
    reports.push_back(check_overshoot_law(records, model));
    reports.push_back(check_ladder_count(records, model, cfg.horizon));
    {
        auto rep = check_independence(records);
        if (options.inject_dependence) rep.notes += " [injected dependence control]";
        reports.push_back(rep);
    }
    {
        // Level-matched horizon for the claim-free supremum: with drift -c
        // instead of -d it reaches the same mean level, so for heavy-tailed
        // perturbations the two horizon-truncation biases cancel in the
        // two-sample statistic.
        sim::PathConfig sup_cfg = cfg;
        sup_cfg.horizon = std::max(cfg.dt, cfg.horizon * model.drift() / model.premium_rate());
        const auto sup_y = sim::sample_sup_Y(model, sup_cfg);
        reports.push_back(check_pre_supremum_law(records, sup_y, model));
    }
    reports.push_back(check_decomposition(records));
    reports.push_back(check_epoch_ordering(records));
    {
        sim::PathConfig half = cfg;
        half.horizon = 0.5 * cfg.horizon;
        half.n_paths = std::min<std::size_t>(cfg.n_paths, 10000);
        reports.push_back(check_duality(model, half));
    }
    reports.push_back(check_occupation(model, cfg, options.occupation_x, options.occupation_y));
    {
        std::vector<sim::SupTerminal> sups;
        sups.reserve(records.size());
        for (const auto& r : records) sups.push_back({r.sup_final, r.terminal});
        for (const double x : options.ruin_levels) {
            reports.push_back(check_ruin_vs_analytic(sups, model, cfg, x));
        }
    }
    return reports;
}

bool all_passed(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j;
        j["name"] = r.name;
        j["statistic"] = r.statistic;
        j["threshold"] = r.threshold;
        if (std::isnan(r.p_value)) j["p_value"] = nullptr;
        else j["p_value"] = r.p_value;
        j["pass"] = r.pass;
        j["vacuous"] = r.vacuous;
        j["n"] = r.n;
        j["notes"] = r.notes;
        out.push_back(j);
    }
    return out.dump(2);
}

} // namespace ruinwerk::validation
