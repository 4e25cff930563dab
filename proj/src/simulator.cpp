#include "ruinwerk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "ruinwerk/math_detail.hpp"
#include "ruinwerk/rng.hpp"

namespace ruinwerk::sim {

namespace {

// Stream ids within a run; a run-level salt keeps independent operations on
// independent substreams of the same (seed, path) pair.
enum StreamId : std::uint32_t {
    kClaimStream = 0,
    kCcpStream = 1,
    kGaussStream = 2,
    kStableStream = 3,
    kBridgeStream = 4,
    kGammaStream = 5,
};

constexpr std::uint32_t kSaltLadder = 0;
constexpr std::uint32_t kSaltSupY = 16;
constexpr std::uint32_t kSaltDrawdown = 32;
constexpr std::uint32_t kSaltSupX = 48;
constexpr std::uint32_t kSaltOccupation = 64;

void run_paths(std::size_t n_paths, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const auto n_threads = static_cast<std::size_t>(threads > 0 ? threads : static_cast<int>(hw));
    if (n_threads <= 1 || n_paths < 2 * n_threads) {
        body(0, n_paths);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::size_t chunk = (n_paths + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n_paths, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

// Inversion sampler for Gamma-process jumps conditioned on size >= eps:
// solve E1(b x) = u * E1(b eps) for x by bracketed bisection.
double sample_gamma_ar_jump(rng::Philox4x32& gen, double shape_b, double eps) {
    const double target = gen.uniform() * detail::expint_e1(shape_b * eps);
    double lo = eps;
    double hi = 2.0 * eps + 2.0 / shape_b;
    while (detail::expint_e1(shape_b * hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e200) break;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (detail::expint_e1(shape_b * mid) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

enum class ExtremumMode { Supremum, Infimum };

// Streams one path of the dual process Xhat = -X in time order and feeds a
// visitor. Between events Xhat moves at the deterministic slope; stochastic
// continuous increments are sampled exactly per inter-event segment. The
// visitor sees, per segment, the total displacement and the extremum of
// Xhat - Xhat(t0) over the segment (bridge-exact for Brownian-only models,
// linear-interpolation otherwise).
//
// Visitor contract:
//   bool segment(double t0, double t1, double dx, double ext, double dx_stoch)
//   bool claim(double t, double size)
//   bool pert_jump(double t, double size)
//   void finish(double t_end, double xhat)
// Callbacks return false to stop the path early.
template <typename Visitor>
void walk_path(const RiskModel& model, const PathConfig& cfg, std::size_t path_index,
               std::uint32_t salt, ExtremumMode mode, Visitor& vis, bool suppress_claims = false) {
    const auto& claims = model.claims();
    const auto& pert = model.perturbation();

    const bool cp_claims = claims.is_compound_poisson() || suppress_claims;
    const bool gamma_ar = !cp_claims && cfg.small_jump_cutoff > 0.0;
    const bool gamma_grid = !cp_claims && !gamma_ar;

    rng::Philox4x32 claim_gen(cfg.seed, path_index, salt + kClaimStream);
    rng::Philox4x32 ccp_gen(cfg.seed, path_index, salt + kCcpStream);
    rng::Philox4x32 gauss_gen(cfg.seed, path_index, salt + kGaussStream);
    rng::Philox4x32 stable_gen(cfg.seed, path_index, salt + kStableStream);
    rng::Philox4x32 bridge_gen(cfg.seed, path_index, salt + kBridgeStream);
    rng::Philox4x32 gamma_gen(cfg.seed, path_index, salt + kGammaStream);
    rng::GaussianSampler gauss;
    rng::GaussianSampler gamma_gauss;

    const double sigma = std::sqrt(pert.gaussian_var());
    const bool has_gauss = pert.gaussian_var() > 0.0;
    const bool has_stable = pert.stable_part().has_value();
    const bool has_ccp = pert.ccp_part().has_value();
    const bool use_bridge = cfg.exact_brownian_sup && has_gauss && !has_stable && !gamma_grid;

    // Slope of Xhat between events: -(premium + ccp compensator) plus the
    // mean-drift replacement of sub-cutoff Gamma jumps in AR mode.
    double slope = -model.premium_rate();
    if (has_ccp) slope -= pert.ccp_part()->rate * pert.ccp_part()->jump.mean();
    double claim_rate = 0.0;
    if (suppress_claims) {
        claim_rate = 0.0;
    } else if (cp_claims) {
        claim_rate = claims.as_compound_poisson().rate;
    } else if (gamma_ar) {
        const auto& g = claims.as_gamma();
        claim_rate = g.shape * detail::expint_e1(g.rate * cfg.small_jump_cutoff);
        slope += g.shape * (-std::expm1(-g.rate * cfg.small_jump_cutoff)) / g.rate;
    }

    const double T = cfg.horizon;
    double t = 0.0;
    double xhat = 0.0;
    double next_claim = claim_rate > 0.0 ? rng::exponential(claim_gen, claim_rate)
                                         : std::numeric_limits<double>::infinity();
    double next_ccp = has_ccp ? rng::exponential(ccp_gen, pert.ccp_part()->rate)
                              : std::numeric_limits<double>::infinity();
    const bool needs_ticks = has_gauss || has_stable || gamma_grid;
    double step = cfg.dt;
    double next_tick = needs_ticks ? step : std::numeric_limits<double>::infinity();

    for (;;) {
        const double t_next = std::min(std::min(next_claim, next_ccp), std::min(next_tick, T));
        const double len = t_next - t;
        if (len > 0.0) {
            double stoch = 0.0;
            if (has_gauss) stoch += sigma * std::sqrt(len) * gauss(gauss_gen);
            if (has_stable) {
                const auto& s = *pert.stable_part();
                stoch -= rng::stable_increment(stable_gen, s.alpha, s.scale, len);
            }
            if (gamma_grid) {
                const auto& g = claims.as_gamma();
                stoch += rng::gamma(gamma_gen, gamma_gauss, g.shape * len, 1.0 / g.rate);
            }
            const double dx = slope * len + stoch;
            double ext;
            if (mode == ExtremumMode::Supremum) {
                ext = use_bridge ? rng::bridge_max(bridge_gen, dx, sigma, len) : std::max(0.0, dx);
            } else {
                ext = use_bridge ? rng::bridge_min(bridge_gen, dx, sigma, len) : std::min(0.0, dx);
            }
            if (!vis.segment(t, t_next, dx, ext, stoch)) return;
            xhat += dx;
        }
        if (t_next >= T) break;
        t = t_next;
        if (t_next == next_claim) {
            double size;
            if (cp_claims) size = claims.as_compound_poisson().jump.sample(claim_gen);
            else size = sample_gamma_ar_jump(claim_gen, claims.as_gamma().rate, cfg.small_jump_cutoff);
            if (!vis.claim(t, size)) return;
            xhat += size;
            next_claim = t + rng::exponential(claim_gen, claim_rate);
        } else if (t_next == next_ccp) {
            const double size = pert.ccp_part()->jump.sample(ccp_gen);
            if (!vis.pert_jump(t, size)) return;
            xhat += size;
            next_ccp = t + rng::exponential(ccp_gen, pert.ccp_part()->rate);
        } else {
            if (t >= cfg.growth_start && cfg.step_growth > 1.0) step *= cfg.step_growth;
            next_tick = t + step;
        }
    }
    vis.finish(T, xhat);
}

// --- visitors ---------------------------------------------------------------

struct LadderVisitor {
    LadderScanner scanner;

    bool segment(double, double, double dx, double ext, double) {
        scanner.continuous(dx, ext);
        return true;
    }
    bool pert_jump(double, double size) {
        scanner.pert_jump(size);
        return true;
    }
    bool claim(double t, double size) {
        scanner.claim(t, size);
        return true;
    }
    void finish(double, double) {}
};

struct SupVisitor {
    double xhat = 0.0;
    double shat = 0.0;
    SupTerminal out;

    bool segment(double, double, double dx, double ext, double) {
        shat = std::max(shat, xhat + ext);
        xhat += dx;
        return true;
    }
    bool pert_jump(double, double size) {
        xhat += size;
        shat = std::max(shat, xhat);
        return true;
    }
    bool claim(double t, double size) { return pert_jump(t, size); }
    void finish(double, double) {
        out.sup = shat;
        out.terminal = xhat;
    }
};

struct InfVisitor {
    double xhat = 0.0;
    double ihat = 0.0;

    bool segment(double, double, double dx, double ext, double) {
        ihat = std::min(ihat, xhat + ext);
        xhat += dx;
        return true;
    }
    bool pert_jump(double, double size) {
        xhat += size;
        return true;
    }
    bool claim(double t, double size) { return pert_jump(t, size); }
    void finish(double, double) {}
};

struct DrawdownVisitor {
    double xhat = 0.0;
    double shat = 0.0;
    double drawdown = 0.0;

    bool segment(double, double, double dx, double ext, double) {
        shat = std::max(shat, xhat + ext);
        xhat += dx;
        return true;
    }
    bool pert_jump(double, double size) {
        xhat += size;
        shat = std::max(shat, xhat);
        return true;
    }
    bool claim(double t, double size) { return pert_jump(t, size); }
    void finish(double, double) { drawdown = shat - xhat; }
};

// Occupation time of {drawdown <= x} until the first modified ladder epoch,
// the first passage of Xhat above y, or the horizon. Drawdown is treated as
// linear within segments (exact for Z = 0, where segments are pure drift).
struct OccupationVisitor {
    const std::vector<double>* xs = nullptr;
    double y = 0.0;

    double xhat = 0.0;
    double shat = 0.0;
    std::vector<double> time_below;
    bool stopped = false;

    void init(const std::vector<double>& xs_in, double y_in) {
        xs = &xs_in;
        y = y_in;
        time_below.assign(xs_in.size(), 0.0);
    }

    void accrue(double d0, double d1, double len) {
        for (std::size_t i = 0; i < xs->size(); ++i) {
            const double x = (*xs)[i];
            double dt_in;
            if (d0 <= x && d1 <= x) dt_in = len;
            else if (d0 > x && d1 > x) dt_in = 0.0;
            else if (d1 > d0) dt_in = len * (x - d0) / (d1 - d0);
            else dt_in = len * (d1 >= x ? 0.0 : (d0 - x) / (d0 - d1));
            time_below[i] += dt_in;
        }
    }

    bool segment(double t0, double t1, double dx, double ext, double) {
        const double d0 = shat - xhat;
        const double shat_new = std::max(shat, xhat + ext);
        const double d1 = shat_new - (xhat + dx);
        accrue(d0, d1, t1 - t0);
        if (xhat + ext > y) { // passage above y within the segment
            stopped = true;
            return false;
        }
        shat = shat_new;
        xhat += dx;
        return true;
    }
    bool claim(double, double size) {
        const double drawdown = shat - xhat;
        if (size > drawdown) { // sigma
            stopped = true;
            return false;
        }
        xhat += size;
        if (xhat > y) {
            stopped = true;
            return false;
        }
        return true;
    }
    bool pert_jump(double, double size) {
        xhat += size;
        shat = std::max(shat, xhat);
        if (xhat > y) {
            stopped = true;
            return false;
        }
        return true;
    }
    void finish(double, double) {}
};

struct SkeletonVisitor {
    std::vector<PathEvent>* events = nullptr;

    bool segment(double, double t1, double, double, double stoch) {
        if (stoch != 0.0) events->push_back({t1, EventKind::GridTick, -stoch});
        return true;
    }
    bool claim(double t, double size) {
        events->push_back({t, EventKind::ClaimJump, size});
        return true;
    }
    bool pert_jump(double t, double size) {
        events->push_back({t, EventKind::PerturbationJump, size});
        return true;
    }
    void finish(double, double) {}
};

} // namespace

void PathConfig::validate() const {
    if (!(horizon > 0.0)) throw std::invalid_argument("path config: horizon must be > 0");
    if (!(dt > 0.0) || dt > horizon) throw std::invalid_argument("path config: need 0 < dt <= horizon");
    if (small_jump_cutoff < 0.0) throw std::invalid_argument("path config: small jump cutoff must be >= 0");
    if (n_paths == 0) throw std::invalid_argument("path config: n_paths must be > 0");
    if (!(step_growth >= 1.0)) throw std::invalid_argument("path config: step growth must be >= 1");
}

std::vector<PathEvent> sample_path(const RiskModel& model, const PathConfig& cfg,
                                   std::size_t path_index) {
    cfg.validate();
    const bool needs_ticks = model.perturbation().has_unbounded_variation() ||
                             (!model.claims().is_compound_poisson() && cfg.small_jump_cutoff == 0.0);
    if (needs_ticks && cfg.horizon / cfg.dt > 5e7) {
        throw std::invalid_argument("sample_path: skeleton too large to materialize; "
                                    "use the streaming operations instead");
    }
    std::vector<PathEvent> events;
    SkeletonVisitor vis;
    vis.events = &events;
    walk_path(model, cfg, path_index, kSaltLadder, ExtremumMode::Supremum, vis);
    return events;
}

std::vector<SupTerminal> simulate_sup(const RiskModel& model, const PathConfig& cfg) {
    cfg.validate();
    std::vector<SupTerminal> out(cfg.n_paths);
    run_paths(cfg.n_paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            SupVisitor vis;
            walk_path(model, cfg, p, kSaltLadder, ExtremumMode::Supremum, vis);
            out[p] = vis.out;
        }
    });
    return out;
}

RuinEstimate estimate_ruin(const RiskModel& model, double x, const PathConfig& cfg) {
    if (x < 0.0) throw std::domain_error("estimate_ruin: x must be >= 0");
    const auto sups = simulate_sup(model, cfg);
    std::size_t hits = 0;
    for (const auto& s : sups) {
        if (s.sup > x) ++hits;
    }
    const double n = static_cast<double>(cfg.n_paths);
    const double p = static_cast<double>(hits) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

std::vector<LadderRecord> simulate_ladder(const RiskModel& model, const PathConfig& cfg) {
    cfg.validate();
    if (!model.claims().is_compound_poisson()) {
        throw std::invalid_argument("simulate_ladder: ladder epochs require finite-activity "
                                    "(compound Poisson) claims; Gamma claims are unsupported");
    }
    std::vector<LadderRecord> out(cfg.n_paths);
    run_paths(cfg.n_paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            LadderVisitor vis;
            walk_path(model, cfg, p, kSaltLadder, ExtremumMode::Supremum, vis);
            out[p] = vis.scanner.finish();
        }
    });
    return out;
}

std::vector<double> sample_sup_Y(const RiskModel& model, const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.n_paths, 0.0);
    if (model.perturbation().is_zero()) return out;
    // sup(-ct - Z) is the dual supremum of the model with the claims removed.
    run_paths(cfg.n_paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            SupVisitor vis;
            walk_path(model, cfg, p, kSaltSupY, ExtremumMode::Supremum, vis, /*suppress_claims=*/true);
            out[p] = vis.out.sup;
        }
    });
    return out;
}

std::vector<OccupationSample> occupation_run(const RiskModel& model, const std::vector<double>& xs,
                                             double y, const PathConfig& cfg) {
    cfg.validate();
    if (!model.claims().is_compound_poisson()) {
        throw std::invalid_argument("occupation_run: requires finite-activity claims");
    }
    if (!(y > 0.0)) throw std::domain_error("occupation_run: y must be > 0");
    std::vector<OccupationSample> out(cfg.n_paths);
    run_paths(cfg.n_paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            OccupationVisitor vis;
            vis.init(xs, y);
            walk_path(model, cfg, p, kSaltOccupation, ExtremumMode::Supremum, vis);
            out[p].time_below = std::move(vis.time_below);
            out[p].no_event_by_horizon = !vis.stopped;
        }
    });
    return out;
}

OccupationEstimate occupation_statistic(const RiskModel& model, double x, double y,
                                        const PathConfig& cfg) {
    if (!(x >= 0.0)) throw std::domain_error("occupation_statistic: x must be >= 0");
    const std::vector<double> xs{x};
    const auto samples = occupation_run(model, xs, y, cfg);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : samples) {
        sum += s.time_below[0];
        sum2 += s.time_below[0] * s.time_below[0];
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

std::vector<double> sample_drawdown(const RiskModel& model, const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.n_paths);
    run_paths(cfg.n_paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            DrawdownVisitor vis;
            walk_path(model, cfg, p, kSaltDrawdown, ExtremumMode::Supremum, vis);
            out[p] = vis.drawdown;
        }
    });
    return out;
}

std::vector<double> sample_sup_X(const RiskModel& model, const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.n_paths);
    run_paths(cfg.n_paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            InfVisitor vis;
            walk_path(model, cfg, p, kSaltSupX, ExtremumMode::Infimum, vis);
            out[p] = -vis.ihat;
        }
    });
    return out;
}

} // namespace ruinwerk::sim
