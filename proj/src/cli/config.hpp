#pragma once

#include "practsig/cpt.hpp"
#include "practsig/model.hpp"
#include "practsig/posterior.hpp"
#include "practsig/sampler.hpp"
#include "practsig/scenarios.hpp"
#include "practsig/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace practsig::cli {

struct RunConfig {
    ModelSpec model;
    mcmc::SamplerConfig sampler;
    double ci_level = 0.94;
    cpt::CostProfile costs;
    cpt::WeightingParams weighting;
    std::vector<scenarios::Scenario> scenarios; ///< user-defined, looked up before presets
    PredictiveOptions predictive;
    std::string composition = "table";
    std::optional<std::uint64_t> seed;
};

/// Reads a JSON config. Unknown keys are rejected so typos do not pass
/// silently. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// Parses a config document already in memory.
RunConfig parse_config(const std::string& text);

/// Truth file: JSON object of parameter name -> value. Missing parameters
/// keep their paper-mean values; z offsets are not part of a truth file.
ParameterVector load_truth(const std::filesystem::path& path);

/// Design file: {"cells": [{"approach", "experience", "subjects"}...],
/// "sessions_per_subject": n}.
synthetic::DesignSpec load_design(const std::filesystem::path& path);

} // namespace practsig::cli
