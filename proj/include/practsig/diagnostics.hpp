#pragma once

#include "practsig/sampler.hpp"

#include <optional>
#include <span>
#include <vector>

namespace practsig::mcmc {

/// Split-R-hat (no rank normalization). nullopt when undefined: fewer than
/// two chains, fewer than four draws per chain, or zero within-chain variance.
std::optional<double> split_rhat(const Draws& draws, std::size_t param);

/// Bulk effective sample size: split chains, rank-normalized, Geyer initial
/// monotone sequence. nullopt when the draws are constant or too short.
std::optional<double> ess_bulk(const Draws& draws, std::size_t param);

/// Same estimators over explicit per-chain sequences of equal length.
std::optional<double> split_rhat(const std::vector<std::vector<double>>& chains);
std::optional<double> ess_bulk(const std::vector<std::vector<double>>& chains);
/// ESS without rank normalization (used for autocorrelation corrections).
std::optional<double> ess_basic(const std::vector<std::vector<double>>& chains);

struct ParameterDiagnostics {
    std::string name;
    std::optional<double> rhat;
    std::optional<double> ess;
};

std::vector<ParameterDiagnostics> diagnose(const Draws& draws);

} // namespace practsig::mcmc
