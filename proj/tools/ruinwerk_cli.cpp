#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ruinwerk/config.hpp"
#include "ruinwerk/pk_engine.hpp"
#include "ruinwerk/simulator.hpp"
#include "ruinwerk/transforms.hpp"
#include "ruinwerk/validation.hpp"

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

bool log_enabled() {
    const char* v = std::getenv("RUINWERK_LOG");
    return v != nullptr && *v != '\0';
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[ruinwerk] " << msg << "\n";
}

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Write-to-temp then rename, so failures never leave partial output.
void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

ruinwerk::config::RunConfig load_config(const CommonArgs& args) {
    auto cfg = ruinwerk::config::load_file(args.config_path);
    if (args.seed) {
        cfg.simulate.path.seed = *args.seed;
        cfg.validate.path.seed = *args.seed;
    }
    cfg.simulate.path.threads = args.threads;
    cfg.validate.path.threads = args.threads;
    return cfg;
}

int cmd_survival(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto& model = cfg.model;
    const double tol = cfg.survival.tol;
    const double x_max = cfg.survival.x_max ? *cfg.survival.x_max
                                            : ruinwerk::pk::default_x_max(model, tol);
    const double h = cfg.survival.h ? *cfg.survival.h : 1e-3 * x_max;
    log_line("survival: x_max=" + num17(x_max) + " h=" + num17(h));

    const auto theta = ruinwerk::pk::pk_survival(model, x_max, h, tol);
    const auto transform = ruinwerk::transforms::survival_transform(model);
    const double theta0 = model.perturbation().is_zero() ? 1.0 - model.rho() : 0.0;

    std::ostringstream csv;
    csv << "x,theta_pk,theta_inversion,abs_diff\n";
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double x = theta.x_at(i);
        // Inversion misbehaves at the atom; the x = 0 value is analytic.
        const double inv = (i == 0) ? theta0 : ruinwerk::transforms::invert_laplace(transform, x);
        csv << num17(x) << ',' << num17(theta.values[i]) << ',' << num17(inv) << ','
            << num17(std::abs(theta.values[i] - inv)) << '\n';
    }
    if (args.out_path.empty()) {
        std::cout << csv.str();
    } else {
        atomic_write(args.out_path, csv.str());
    }
    return 0;
}

int cmd_transform(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto& model = cfg.model;
    if (cfg.transform.betas.empty()) {
        throw ruinwerk::config::ConfigError("transform: config must list at least one beta > 0");
    }
    std::ostringstream csv;
    csv << "beta,psi,LH,LG,survival_transform,kappa\n";
    for (const double beta : cfg.transform.betas) {
        csv << num17(beta) << ',' << num17(model.exponent(beta)) << ','
            << num17(ruinwerk::transforms::laplace_H(model, beta)) << ','
            << num17(ruinwerk::transforms::laplace_G(model, beta)) << ','
            << num17(ruinwerk::transforms::laplace_survival(model, beta)) << ','
            << num17(ruinwerk::transforms::ladder_exponent(model, beta)) << '\n';
    }
    if (args.out_path.empty()) {
        std::cout << csv.str();
    } else {
        atomic_write(args.out_path, csv.str());
    }
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto& model = cfg.model;
    const auto& params = cfg.simulate;
    nlohmann::json summary;
    summary["mode"] = params.mode;
    summary["n_paths"] = params.path.n_paths;
    summary["seed"] = params.path.seed;
    summary["horizon"] = params.path.horizon;
    summary["dt"] = params.path.dt;

    std::ostringstream csv;
    if (params.mode == "ladder") {
        const auto records = ruinwerk::sim::simulate_ladder(model, params.path);
        csv << "path_id,i,sigma,L,J\n";
        double total_epochs = 0.0;
        std::size_t with_epoch = 0;
        for (std::size_t p = 0; p < records.size(); ++p) {
            const auto& r = records[p];
            total_epochs += static_cast<double>(r.epoch_count());
            if (r.epoch_count() > 0) ++with_epoch;
            for (std::size_t i = 0; i < r.epoch_count(); ++i) {
                csv << p << ',' << (i + 1) << ',' << num17(r.sigma_times[i]) << ','
                    << num17(r.pre_suprema[i]) << ',' << num17(r.overshoots[i]) << '\n';
            }
        }
        const double n = static_cast<double>(records.size());
        summary["mean_N"] = total_epochs / n;
        summary["frac_sigma_finite"] = static_cast<double>(with_epoch) / n;
        nlohmann::json ruin;
        for (const double lvl : params.ruin_levels) {
            std::size_t hits = 0;
            for (const auto& r : records) {
                if (r.sup_final > lvl) ++hits;
            }
            const double p_hat = static_cast<double>(hits) / n;
            ruin[num17(lvl)] = {{"p_hat", p_hat},
                                {"std_error", std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / n)}};
        }
        summary["ruin"] = ruin;
    } else {
        const auto sups = ruinwerk::sim::simulate_sup(model, params.path);
        csv << "path_id,sup,terminal\n";
        for (std::size_t p = 0; p < sups.size(); ++p) {
            csv << p << ',' << num17(sups[p].sup) << ',' << num17(sups[p].terminal) << '\n';
        }
        const double n = static_cast<double>(sups.size());
        nlohmann::json ruin;
        for (const double lvl : params.ruin_levels) {
            std::size_t hits = 0;
            for (const auto& s : sups) {
                if (s.sup > lvl) ++hits;
            }
            const double p_hat = static_cast<double>(hits) / n;
            ruin[num17(lvl)] = {{"p_hat", p_hat},
                                {"std_error", std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / n)}};
        }
        summary["ruin"] = ruin;
    }

    if (args.out_path.empty()) {
        std::cout << csv.str();
        std::cout << summary.dump(2) << "\n";
    } else {
        atomic_write(args.out_path, csv.str());
        atomic_write(args.out_path + ".summary.json", summary.dump(2) + "\n");
    }
    return 0;
}

int cmd_validate(const CommonArgs& args, bool inject_dependence) {
    const auto cfg = load_config(args);
    auto options = cfg.validate.battery;
    options.inject_dependence = inject_dependence;
    log_line("validate: n_paths=" + std::to_string(cfg.validate.path.n_paths));
    const auto reports = ruinwerk::validation::run_battery(cfg.model, cfg.validate.path, options);
    const std::string json_text = ruinwerk::validation::reports_to_json(reports) + "\n";
    if (args.out_path.empty()) {
        std::cout << json_text;
    } else {
        atomic_write(args.out_path, json_text);
    }
    for (const auto& r : reports) {
        log_line(r.name + ": " + (r.pass ? "pass" : "FAIL") + (r.vacuous ? " (vacuous)" : ""));
    }
    return ruinwerk::validation::all_passed(reports) ? 0 : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ruinwerk: survival probabilities and ladder-identity validation "
                 "for perturbed risk processes"};
    app.require_subcommand(1);

    CommonArgs args;
    bool inject_dependence = false;

    auto add_common = [&args](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "JSON model/run configuration")->required();
        sub->add_option("--out", args.out_path, "output file (stdout when omitted)");
        sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--threads", args.threads, "worker threads (default: machine parallelism)");
    };

    auto* survival = app.add_subcommand("survival", "survival probability curve (series + inversion)");
    add_common(survival);
    auto* transform = app.add_subcommand("transform", "evaluate Laplace-domain objects on a beta grid");
    add_common(transform);
    auto* simulate = app.add_subcommand("simulate", "simulate paths; ladder records or ruin estimates");
    add_common(simulate);
    auto* validate = app.add_subcommand("validate", "run the statistical identity battery");
    add_common(validate);
    validate->add_flag("--inject-dependence", inject_dependence,
                       "negative control: inject dependence between L0 and J1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfigError;
    }

    const auto started = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (survival->parsed()) rc = cmd_survival(args);
        else if (transform->parsed()) rc = cmd_transform(args);
        else if (simulate->parsed()) rc = cmd_simulate(args);
        else if (validate->parsed()) rc = cmd_validate(args, inject_dependence);
    } catch (const ruinwerk::config::ConfigError& e) {
        std::cerr << "ruinwerk: config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ruinwerk: invalid configuration: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "ruinwerk: numerical failure: " << e.what() << "\n";
        return kExitNumericalError;
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    log_line("done in " + std::to_string(elapsed.count()) + " ms");
    return rc;
}
