#include "ruinwerk/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ruinwerk::config {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError(where + ": missing or non-numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

JumpLaw parse_jump(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ConfigError(where + ": jump law must be an object with a 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "exponential") return JumpLaw::exponential(require_number(j, "rate", where));
        if (kind == "lomax") {
            return JumpLaw::lomax(require_number(j, "shape", where), require_number(j, "scale", where));
        }
        if (kind == "deterministic") return JumpLaw::deterministic(require_number(j, "size", where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown jump kind '" + kind + "'");
}

ClaimModel parse_claim(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("params")) {
        throw ConfigError("claim: must be an object with 'kind' and 'params'");
    }
    const std::string kind = j["kind"].get<std::string>();
    const json& p = j["params"];
    try {
        if (kind == "compound_poisson") {
            return ClaimModel::compound_poisson(require_number(p, "rate", "claim.params"),
                                                parse_jump(p.at("jump"), "claim.params.jump"));
        }
        if (kind == "gamma_process") {
            return ClaimModel::gamma_process(require_number(p, "shape", "claim.params"),
                                             require_number(p, "rate", "claim.params"));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("claim: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("claim: ") + e.what());
    }
    throw ConfigError("claim: unknown kind '" + kind + "' (expected compound_poisson or gamma_process)");
}

PerturbationModel parse_perturbation(const json& root) {
    if (!root.contains("perturbation") || root["perturbation"].is_null()) {
        return PerturbationModel::none();
    }
    const json& j = root["perturbation"];
    if (!j.is_object()) throw ConfigError("perturbation: must be an object");
    double gaussian_var = 0.0;
    std::optional<StableComponent> stable;
    std::optional<CompensatedPoissonComponent> ccp;
    if (j.contains("gaussian_var") && !j["gaussian_var"].is_null()) {
        gaussian_var = j["gaussian_var"].get<double>();
    }
    if (j.contains("stable") && !j["stable"].is_null()) {
        const json& s = j["stable"];
        stable = StableComponent{require_number(s, "alpha", "perturbation.stable"),
                                 require_number(s, "scale", "perturbation.stable")};
    }
    if (j.contains("ccp") && !j["ccp"].is_null()) {
        const json& c = j["ccp"];
        ccp = CompensatedPoissonComponent{require_number(c, "rate", "perturbation.ccp"),
                                          parse_jump(c.at("jump"), "perturbation.ccp.jump")};
    }
    try {
        return PerturbationModel(gaussian_var, stable, ccp);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("perturbation: ") + e.what());
    }
}

void parse_path_block(const json& j, sim::PathConfig& path, bool& horizon_given,
                      const std::string& where) {
    if (j.contains("horizon")) {
        path.horizon = j["horizon"].get<double>();
        horizon_given = true;
    }
    if (j.contains("dt")) path.dt = j["dt"].get<double>();
    if (j.contains("n_paths")) path.n_paths = j["n_paths"].get<std::size_t>();
    if (j.contains("seed")) path.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("small_jump_cutoff")) path.small_jump_cutoff = j["small_jump_cutoff"].get<double>();
    if (j.contains("exact_brownian_sup")) path.exact_brownian_sup = j["exact_brownian_sup"].get<bool>();
    if (j.contains("step_growth")) path.step_growth = j["step_growth"].get<double>();
    if (j.contains("growth_start")) path.growth_start = j["growth_start"].get<double>();
    if (path.small_jump_cutoff < 0.0) throw ConfigError(where + ": small_jump_cutoff must be >= 0");
}

} // namespace

RunConfig parse(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    if (!root.contains("premium_rate")) throw ConfigError("config: missing 'premium_rate'");
    if (!root.contains("claim")) throw ConfigError("config: missing 'claim'");

    const double c = root["premium_rate"].get<double>();
    ClaimModel claims = parse_claim(root["claim"]);
    PerturbationModel pert = parse_perturbation(root);

    std::optional<RiskModel> model;
    try {
        model.emplace(c, std::move(claims), std::move(pert));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg{std::move(*model), {}, {}, {}, {}};

    if (root.contains("survival")) {
        const json& s = root["survival"];
        if (s.contains("x_max")) {
            cfg.survival.x_max = s["x_max"].get<double>();
            if (!(*cfg.survival.x_max > 0.0)) throw ConfigError("survival: x_max must be > 0");
        }
        if (s.contains("h")) {
            cfg.survival.h = s["h"].get<double>();
            if (!(*cfg.survival.h > 0.0)) throw ConfigError("survival: h must be > 0");
        }
        if (s.contains("tol")) cfg.survival.tol = s["tol"].get<double>();
        if (!(cfg.survival.tol > 0.0 && cfg.survival.tol < 1.0)) {
            throw ConfigError("survival: tol must lie in (0, 1)");
        }
        if (cfg.survival.x_max && cfg.survival.h && *cfg.survival.h > *cfg.survival.x_max) {
            throw ConfigError("survival: h must not exceed x_max");
        }
    }
    if (root.contains("transform")) {
        const json& t = root["transform"];
        if (t.contains("betas")) {
            for (const auto& b : t["betas"]) {
                const double beta = b.get<double>();
                if (!(beta > 0.0)) throw ConfigError("transform: betas must be > 0");
                cfg.transform.betas.push_back(beta);
            }
        }
    }

    // Simulation defaults: T = 40/d, dt = 1e-3, 1e4 paths.
    const double default_horizon = 40.0 / cfg.model.drift();
    auto init_path = [&](sim::PathConfig& p) {
        p.horizon = default_horizon;
        p.dt = 1e-3;
        p.n_paths = 10000;
        p.seed = 42;
    };
    init_path(cfg.simulate.path);
    init_path(cfg.validate.path);

    if (root.contains("simulate")) {
        const json& s = root["simulate"];
        parse_path_block(s, cfg.simulate.path, cfg.simulate.horizon_given, "simulate");
        if (s.contains("mode")) {
            cfg.simulate.mode = s["mode"].get<std::string>();
            if (cfg.simulate.mode != "ladder" && cfg.simulate.mode != "ruin") {
                throw ConfigError("simulate: mode must be 'ladder' or 'ruin'");
            }
        }
        if (s.contains("ruin_levels")) {
            cfg.simulate.ruin_levels.clear();
            for (const auto& x : s["ruin_levels"]) {
                const double lvl = x.get<double>();
                if (lvl < 0.0) throw ConfigError("simulate: ruin levels must be >= 0");
                cfg.simulate.ruin_levels.push_back(lvl);
            }
        }
    }
    if (root.contains("validate")) {
        const json& v = root["validate"];
        parse_path_block(v, cfg.validate.path, cfg.validate.horizon_given, "validate");
        if (v.contains("occupation_x")) {
            cfg.validate.battery.occupation_x.clear();
            for (const auto& x : v["occupation_x"]) {
                cfg.validate.battery.occupation_x.push_back(x.get<double>());
            }
        }
        if (v.contains("occupation_y")) cfg.validate.battery.occupation_y = v["occupation_y"].get<double>();
        if (v.contains("ruin_levels")) {
            cfg.validate.battery.ruin_levels.clear();
            for (const auto& x : v["ruin_levels"]) {
                cfg.validate.battery.ruin_levels.push_back(x.get<double>());
            }
        }
    }

    try {
        cfg.simulate.path.validate();
        cfg.validate.path.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

namespace {

json jump_to_json(const JumpLaw& law) {
    json j;
    std::visit(
        [&j](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJump>) {
                j["kind"] = "exponential";
                j["rate"] = l.rate;
            } else if constexpr (std::is_same_v<T, LomaxJump>) {
                j["kind"] = "lomax";
                j["shape"] = l.shape;
                j["scale"] = l.scale;
            } else {
                j["kind"] = "deterministic";
                j["size"] = l.size;
            }
        },
        law.law());
    return j;
}

} // namespace

std::string serialize(const RunConfig& cfg) {
    json root;
    root["premium_rate"] = cfg.model.premium_rate();
    json claim;
    std::visit(
        [&claim](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CompoundPoissonClaims>) {
                claim["kind"] = "compound_poisson";
                claim["params"] = {{"rate", c.rate}, {"jump", jump_to_json(c.jump)}};
            } else {
                claim["kind"] = "gamma_process";
                claim["params"] = {{"shape", c.shape}, {"rate", c.rate}};
            }
        },
        cfg.model.claims().variant());
    root["claim"] = claim;

    const auto& z = cfg.model.perturbation();
    if (!z.is_zero()) {
        json p;
        if (z.gaussian_var() > 0.0) p["gaussian_var"] = z.gaussian_var();
        if (z.stable_part()) {
            p["stable"] = {{"alpha", z.stable_part()->alpha}, {"scale", z.stable_part()->scale}};
        }
        if (z.ccp_part()) {
            p["ccp"] = {{"rate", z.ccp_part()->rate}, {"jump", jump_to_json(z.ccp_part()->jump)}};
        }
        root["perturbation"] = p;
    }

    json surv;
    if (cfg.survival.x_max) surv["x_max"] = *cfg.survival.x_max;
    if (cfg.survival.h) surv["h"] = *cfg.survival.h;
    surv["tol"] = cfg.survival.tol;
    root["survival"] = surv;
    if (!cfg.transform.betas.empty()) root["transform"] = {{"betas", cfg.transform.betas}};

    auto path_to_json = [](const sim::PathConfig& p) {
        json j;
        j["horizon"] = p.horizon;
        j["dt"] = p.dt;
        j["n_paths"] = p.n_paths;
        j["seed"] = p.seed;
        if (p.small_jump_cutoff > 0.0) j["small_jump_cutoff"] = p.small_jump_cutoff;
        if (!p.exact_brownian_sup) j["exact_brownian_sup"] = false;
        if (p.step_growth > 1.0) {
            j["step_growth"] = p.step_growth;
            j["growth_start"] = p.growth_start;
        }
        return j;
    };
    json simj = path_to_json(cfg.simulate.path);
    simj["mode"] = cfg.simulate.mode;
    simj["ruin_levels"] = cfg.simulate.ruin_levels;
    root["simulate"] = simj;
    json valj = path_to_json(cfg.validate.path);
    valj["occupation_x"] = cfg.validate.battery.occupation_x;
    valj["occupation_y"] = cfg.validate.battery.occupation_y;
    valj["ruin_levels"] = cfg.validate.battery.ruin_levels;
    root["validate"] = valj;
    return root.dump(2);
}

} // namespace ruinwerk::config
