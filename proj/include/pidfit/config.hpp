#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "pidfit/tuner.hpp"

namespace pidfit {

/// Parsed and validated problem configuration. Unknown keys anywhere in the
/// file are an error; all defaults are filled in so echo() reproduces the
/// exact problem.
struct RunConfig {
    TransferFunction plant;
    DesiredSpec target;
    PidGains lo{0.0, 0.0, 0.0};
    PidGains hi{TuneProblem::kUnbounded, TuneProblem::kUnbounded, TuneProblem::kUnbounded};
    int max_evals = 3000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    int n_starts = 1;
    std::optional<double> t_final;  // default: 4x the target's predicted settling
    int n_samples = 2000;

    double horizon() const;
    TuneProblem to_problem() const;

    /// Fully-defaulted config (including the computed horizon), embedded in
    /// every report for reproducibility.
    nlohmann::json echo() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& j);

}  // namespace pidfit
