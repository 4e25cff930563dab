#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruinwerk/risk_model.hpp"
#include "ruinwerk/simulator.hpp"
#include "ruinwerk/validation.hpp"

namespace ruinwerk::config {

// Thrown on malformed or semantically invalid configuration; the message
// names the violated condition. The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SurvivalParams {
    std::optional<double> x_max; // default: probed so theta(x_max) >= 1 - 10 tol
    std::optional<double> h;     // default: 1e-3 * x_max
    double tol = 1e-8;
};

struct TransformParams {
    std::vector<double> betas;
};

struct SimulateParams {
    sim::PathConfig path;
    bool horizon_given = false; // default horizon is 40/d
    std::string mode = "ladder"; // "ladder" | "ruin"
    std::vector<double> ruin_levels{0.0, 1.0, 2.0};
};

struct ValidateParams {
    sim::PathConfig path;
    bool horizon_given = false;
    validation::BatteryOptions battery;
};

struct RunConfig {
    RiskModel model;
    SurvivalParams survival;
    TransformParams transform;
    SimulateParams simulate;
    ValidateParams validate;
};

// Parse a JSON document. Schema:
//   {
//     "premium_rate": 2.0,
//     "claim": {"kind": "compound_poisson", "params": {"rate": 1.0,
//               "jump": {"kind": "exponential", "rate": 1.0}}},
//     "perturbation": {"gaussian_var": 2.0,
//                      "stable": {"alpha": 1.5, "scale": 1.0},
//                      "ccp": {"rate": 0.5, "jump": {...}}},
//     "survival": {...}, "transform": {...}, "simulate": {...}, "validate": {...}
//   }
// claim kinds: compound_poisson {rate, jump}, gamma_process {shape, rate};
// jump kinds: exponential {rate}, lomax {shape, scale}, deterministic {size}.
// All perturbation components are optional; absent means Z = 0.
RunConfig parse(const std::string& json_text);

RunConfig load_file(const std::string& path);

// Canonical JSON for the model and command blocks; parse(serialize(c)) is
// semantically idempotent.
std::string serialize(const RunConfig& cfg);

} // namespace ruinwerk::config
