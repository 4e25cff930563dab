#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ruinwerk/risk_model.hpp"

namespace ruinwerk::sim {

// Simulation configuration. The continuous components (Brownian, stable,
// Gamma) are sampled exactly on a time skeleton of step `dt`; claim and
// compensated-Poisson jumps are event-driven at their exact times. For
// heavy-tailed perturbations the skeleton step may be allowed to grow
// geometrically after `growth_start`, which extends the horizon at ~constant
// relative time resolution and negligible cost.
struct PathConfig {
    double horizon = 0.0;          // T
    double dt = 0.0;               // skeleton step
    double small_jump_cutoff = 0.0; // epsilon for Gamma claims (0 = exact per-step increments)
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    int threads = 0;               // 0 = hardware concurrency; results do not depend on it

    // Exact Brownian-bridge sampling of within-segment suprema. Active only
    // when the perturbation's continuous part is Brownian-only; removes the
    // O(sqrt(dt)) discretization bias of supremum/drawdown statistics.
    bool exact_brownian_sup = true;

    double step_growth = 1.0;      // per-tick step multiplier after growth_start
    double growth_start = std::numeric_limits<double>::infinity();

    void validate() const;
};

enum class EventKind { GridTick, ClaimJump, PerturbationJump };

// One entry of a materialized path skeleton, in time order.
//   ClaimJump:        `size` > 0 is the claim amount (X drops by size).
//   PerturbationJump: `size` > 0 is the downward jump magnitude of Z.
//   GridTick:         `size` is the signed increment of X's stochastic
//                     continuous components over the preceding interval.
// The deterministic drift (premium, compensators) is not materialized.
struct PathEvent {
    double t;
    EventKind kind;
    double size;
};

// Per-path modified ladder data. sigma_times are the epochs where a claim
// jump of the dual process exceeded the running drawdown; overshoots[i] and
// pre_suprema[i] are J_{i+1} and L_i; pre_suprema has one trailing entry
// L_N = Shat(T) - Shat(sigma_N).
struct LadderRecord {
    std::vector<double> sigma_times;
    std::vector<double> pre_suprema;
    std::vector<double> overshoots;
    double sup_final = 0.0; // Shat(T)
    double terminal = 0.0;  // Xhat(T), kept for horizon-bias estimation

    std::size_t epoch_count() const { return sigma_times.size(); }
};

// Incremental modified-ladder scanner over an event sequence in time order.
// The simulator feeds it path events; tests can drive synthetic paths.
// `continuous(dx, ext)` advances the dual process by dx with extremum ext
// relative to the segment start (ext >= max(0, dx)); `claim` applies a claim
// jump and detects the epoch; `pert_jump` applies a non-claim upward jump.
class LadderScanner {
public:
    void continuous(double dx, double ext) {
        shat_ = std::max(shat_, xhat_ + ext);
        xhat_ += dx;
    }
    void pert_jump(double size) {
        xhat_ += size;
        shat_ = std::max(shat_, xhat_);
    }
    void claim(double t, double size) {
        const double drawdown = shat_ - xhat_;
        if (size > drawdown) {
            rec_.sigma_times.push_back(t);
            rec_.pre_suprema.push_back(shat_ - sup_after_epoch_);
            rec_.overshoots.push_back(size - drawdown);
            xhat_ += size;
            shat_ = xhat_;
            sup_after_epoch_ = shat_;
        } else {
            xhat_ += size;
        }
    }
    double drawdown() const { return shat_ - xhat_; }
    LadderRecord finish() {
        rec_.pre_suprema.push_back(shat_ - sup_after_epoch_);
        rec_.sup_final = shat_;
        rec_.terminal = xhat_;
        return std::move(rec_);
    }

private:
    LadderRecord rec_;
    double xhat_ = 0.0;
    double shat_ = 0.0;
    double sup_after_epoch_ = 0.0;
};

struct RuinEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
};

struct OccupationEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Supremum and terminal value of the dual path at the horizon.
struct SupTerminal {
    double sup = 0.0;      // Shat(T)
    double terminal = 0.0; // Xhat(T)
};

// Materialize one path skeleton; deterministic in (cfg.seed, path_index).
// Intended for tests and export; throws if the skeleton would be huge.
std::vector<PathEvent> sample_path(const RiskModel& model, const PathConfig& cfg,
                                   std::size_t path_index);

// Supremum/terminal of the dual process for every path (any claim model).
std::vector<SupTerminal> simulate_sup(const RiskModel& model, const PathConfig& cfg);

// P(inf_{t<=T} X(t) < -x) with binomial standard error. Underestimates the
// infinite-horizon ruin probability; the truncation is quantified by the
// validation layer via the analytic survival curve.
RuinEstimate estimate_ruin(const RiskModel& model, double x, const PathConfig& cfg);

// Modified-ladder decomposition of every path. Requires finite-activity
// claims (compound Poisson); Gamma claims are rejected.
std::vector<LadderRecord> simulate_ladder(const RiskModel& model, const PathConfig& cfg);

// Samples of sup_{t<=T} (-ct - Z(t)), one per path (all zero when Z = 0).
std::vector<double> sample_sup_Y(const RiskModel& model, const PathConfig& cfg);

// Per-path occupation times int_0^{sigma ^ tau_y ^ T} 1{drawdown <= x} dt for
// each x in xs, plus the indicator that neither sigma nor tau_y occurred by T.
struct OccupationSample {
    std::vector<double> time_below;
    bool no_event_by_horizon = false;
};
std::vector<OccupationSample> occupation_run(const RiskModel& model, const std::vector<double>& xs,
                                             double y, const PathConfig& cfg);

// Monte Carlo estimate of E int_0^{sigma ^ tau_y} 1{drawdown <= x} dt.
OccupationEstimate occupation_statistic(const RiskModel& model, double x, double y,
                                        const PathConfig& cfg);

// Drawdown Shat(T) - Xhat(T) at the horizon, one sample per path.
std::vector<double> sample_drawdown(const RiskModel& model, const PathConfig& cfg);

// S(T) = sup_{t<=T} X(t), one sample per path (independent streams from the
// drawdown run, so two-sample tests between them are valid).
std::vector<double> sample_sup_X(const RiskModel& model, const PathConfig& cfg);

} // namespace ruinwerk::sim
