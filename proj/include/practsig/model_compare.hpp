#pragma once

#include "practsig/model.hpp"
#include "practsig/posterior.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace practsig {

/// draws x observations matrix of pointwise log-likelihoods, row-major.
class LogLikMatrix {
public:
    LogLikMatrix(std::string label, std::size_t draws, std::size_t observations, std::vector<double> values);

    const std::string& label() const noexcept { return label_; }
    std::size_t draws() const noexcept { return draws_; }
    std::size_t observations() const noexcept { return observations_; }
    double operator()(std::size_t draw, std::size_t obs) const { return values_[draw * observations_ + obs]; }
    /// Log-likelihood of one observation across draws.
    std::vector<double> observation(std::size_t obs) const;

private:
    std::string label_;
    std::size_t draws_;
    std::size_t observations_;
    std::vector<double> values_;
};

/// Pointwise log-likelihood of `data` under every retained draw.
LogLikMatrix pointwise_log_likelihood(const Posterior& post, const Dataset& data, std::string label);

struct WaicResult {
    double elpd = 0.0;
    double p_eff = 0.0;
    double se = 0.0;
    double lppd = 0.0;
    std::vector<double> pointwise_elpd;
};

WaicResult waic(const LogLikMatrix& ll);

struct ParetoFit {
    double k = 0.0;
    double sigma = 0.0;
};

/// Generalized Pareto fit to positive exceedances (Zhang & Stephens
/// profile estimator with the usual weakly informative shrinkage of k
/// toward 0.5). nullopt when the exceedances are all equal.
std::optional<ParetoFit> fit_generalized_pareto(std::span<const double> exceedances);

/// Quantile function of the generalized Pareto distribution (location 0).
double gpd_quantile(double p, double k, double sigma);

struct PsisWeights {
    std::vector<double> log_weights; ///< normalized: logsumexp == 0
    std::optional<double> pareto_k;  ///< nullopt when the tail cannot be fitted
    /// logsumexp of the smoothed weights relative to the largest raw weight,
    /// before normalization.
    double log_normalizer = 0.0;
};

/// Pareto-smoothed importance weights from raw log ratios.
PsisWeights psis_smooth(std::span<const double> log_ratios);

struct LooResult {
    double elpd = 0.0;
    double se = 0.0;
    double p_eff = 0.0;
    std::vector<double> pointwise_elpd;
    std::vector<std::optional<double>> pareto_k;

    /// Observations with k > 0.7 (or a tail that could not be fitted).
    std::vector<std::size_t> flagged(double threshold = 0.7) const;
};

LooResult psis_loo(const LogLikMatrix& ll);

struct ModelScore {
    std::string label;
    LooResult loo;
    WaicResult waic;
    int rank = 0;          ///< 1 = best elpd_loo
    double elpd_diff = 0.0; ///< relative to the best model (<= 0)
    double diff_se = 0.0;
};

struct ComparisonResult {
    std::vector<ModelScore> models; ///< sorted by rank
};

ComparisonResult compare(const std::vector<LogLikMatrix>& models);

/// Difference in pointwise elpd (a - b) and its standard error.
struct ElpdDifference {
    double diff = 0.0;
    double se = 0.0;
};
ElpdDifference elpd_difference(std::span<const double> pointwise_a, std::span<const double> pointwise_b);

} // namespace practsig
