#pragma once

#include "practsig/diagnostics.hpp"
#include "practsig/model.hpp"
#include "practsig/sampler.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace practsig {

struct DataFingerprint {
    std::uint64_t hash = 0;
    int n_subjects = 0;
    std::size_t n_observations = 0;

    static DataFingerprint of(const Dataset& data)
    {
        return {data.fingerprint(), data.n_subjects(), data.size()};
    }
};

/// Retained draws plus everything needed to interpret them.
struct Posterior {
    mcmc::Draws draws;
    ModelSpec model;
    DataFingerprint data;
    std::uint64_t seed = 0;
    std::vector<mcmc::ParameterDiagnostics> diagnostics;

    /// Builds a posterior and computes diagnostics for every parameter.
    /// Throws InputError if the draw columns do not match the model layout.
    static Posterior from_draws(mcmc::Draws draws, const ModelSpec& model, const DataFingerprint& data,
                                std::uint64_t seed);

    ParameterVector parameters(std::size_t pooled_draw) const;
    std::size_t size() const { return draws.total_draws(); }
};

/// Sampler target over the unconstrained parameter vector of a model
/// (sigma_s on the log scale, Jacobian included). Updates the population
/// parameters as one block and each subject offset as its own block. For M2
/// two extra moves run along the directions that leave every subject
/// intercept unchanged: sigma_s against the offsets, alpha against the offsets.
class ModelTarget final : public mcmc::Target {
public:
    ModelTarget(const Dataset& data, const ModelSpec& spec, int population_repeats = 20);

    std::size_t dimension() const override;
    double log_density(std::span<const double> x) const override;
    double block_log_density(std::size_t block, std::span<const double> x) const override;
    std::vector<mcmc::Block> blocks() const override;
    double transform(std::size_t block, std::span<const double> x, double e, std::span<double> out) const override;
    std::vector<double> initial_point(Rng& rng) const override;
    std::vector<std::string> names() const override;
    void constrain(std::span<const double> x, std::span<double> out) const override;

private:
    const Dataset& data_;
    ModelSpec spec_;
    int population_repeats_;
};

Posterior fit(const Dataset& data, const ModelSpec& spec, const mcmc::SamplerConfig& config);

struct SummaryRow {
    std::string parameter;
    double mean = 0.0;
    double sd = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Mean, sd, and equal-tailed type-7 interval of every column.
std::vector<SummaryRow> summarize(const mcmc::Draws& draws, double ci_level = 0.94);

/// Population-level parameters only unless `include_subject_offsets`.
std::vector<SummaryRow> summarize(const Posterior& post, double ci_level = 0.94,
                                  bool include_subject_offsets = false);

struct MarginalDensity {
    std::string parameter;
    std::vector<double> edges;   ///< bins + 1 edges
    std::vector<double> heights; ///< density; sum(height * width) == 1
    double median = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double prob_below_zero = 0.0;
};

MarginalDensity marginal_density(const Posterior& post, const std::string& parameter, int bins = 40,
                                 double ci_level = 0.94);
MarginalDensity marginal_density(std::span<const double> samples, int bins = 40, double ci_level = 0.94);

/// Predictor setting as mixture weights: P(approach = 1) and
/// P(experience = 1). 0 and 1 are the pure settings.
struct PredictorSetting {
    double testcase_weight = 0.0;
    double high_experience_weight = 0.0;

    void validate() const;
    friend bool operator==(const PredictorSetting&, const PredictorSetting&) = default;
};

/// Experience and approach mixture proportions for "a mix of developers".
struct MixtureComposition {
    double high_experience = 23.0 / 35.0;
    double testcase = 0.5;

    /// 12 low / 23 high, balanced approaches (experimental design table).
    static MixtureComposition design_table();
    /// 23 low / 12 high, as stated where the pooled hourly cost is derived.
    static MixtureComposition cost_text();
    /// Empirical proportions of a dataset.
    static MixtureComposition from_dataset(const Dataset& data);
    static MixtureComposition parse(const std::string& name);
};

/// Named settings: exploratory, testcase, low, high, exploratory-low,
/// exploratory-high, testcase-low, testcase-high, mixed. Mixed factors use
/// `mix`. Throws ConfigError for unknown names.
PredictorSetting parse_setting(const std::string& name, const MixtureComposition& mix);

enum class PredictiveMode {
    expectation, ///< posterior of E[faults | theta]
    outcome,     ///< simulated integer fault counts
};

enum class SubjectMode {
    fresh,   ///< integrate over a new subject: z ~ Normal(0, 1) per draw
    average, ///< z = 0
};

struct PredictiveOptions {
    PredictiveMode mode = PredictiveMode::expectation;
    SubjectMode subject = SubjectMode::fresh;
    int n_rep = 1; ///< outcome mode: simulated counts per posterior draw
    std::uint64_t seed = 0;
};

struct PredictiveDistribution {
    PredictiveMode mode = PredictiveMode::expectation;
    PredictorSetting setting;
    std::vector<double> expected;     ///< expectation mode
    std::vector<std::int64_t> counts; ///< outcome mode

    std::size_t size() const { return mode == PredictiveMode::expectation ? expected.size() : counts.size(); }
    std::vector<double> samples() const;
};

PredictiveDistribution posterior_predictive(const Posterior& post, const PredictorSetting& setting,
                                            const PredictiveOptions& options = {});

struct PredictiveInterval {
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
};

/// Equal-tailed interval; integer endpoints (inverse-CDF quantiles) in outcome mode.
PredictiveInterval predictive_interval(const PredictiveDistribution& pd, double level = 0.94);

std::string to_string(PredictiveMode mode);
std::string to_string(SubjectMode mode);
PredictiveMode parse_predictive_mode(const std::string& text);
SubjectMode parse_subject_mode(const std::string& text);

} // namespace practsig
