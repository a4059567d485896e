#pragma once

#include "practsig/cpt.hpp"
#include "practsig/posterior.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace practsig::scenarios {

struct ScenarioOption {
    std::string label;
    PredictorSetting setting;
    cpt::CostSelector cost = cpt::CostSelector::mixed;
};

struct Scenario {
    std::string name;
    std::vector<ScenarioOption> options;

    /// At least two options, valid mixture weights.
    void validate() const;
};

/// Built-in manager decisions:
///  - approach: exploratory vs test-case, mixed developers, pooled cost;
///  - experience: low vs high, mixed approaches, per-level cost;
///  - exploratory: low vs high, all exploratory, per-level cost.
Scenario preset(const std::string& name, const MixtureComposition& mix = MixtureComposition::design_table());
std::vector<std::string> preset_names();

struct EvaluationOptions {
    int n_rep = 1;          ///< simulated counts per posterior draw
    std::uint64_t seed = 0;
    SubjectMode subject = SubjectMode::fresh;
    int batches = 20;       ///< batch-means Monte-Carlo standard error
    std::array<double, 3> split{0.03, 0.94, 0.03};
};

/// Empirical pmf over simulated counts mapped through the session value.
/// The support is exactly the set of distinct counts.
cpt::Prospect prospect_from_counts(std::span<const std::int64_t> counts, double savings_per_fault,
                                   double hourly_cost, double hours);

/// Outcome-predictive counts for one option. The generator seed is derived
/// from the evaluation seed and the predictor setting, so identical options
/// see identical samples.
std::vector<std::int64_t> simulate_counts(const Posterior& post, const PredictorSetting& setting,
                                          const EvaluationOptions& options);

cpt::Prospect build_prospect(const Posterior& post, const PredictorSetting& setting, cpt::CostSelector cost,
                             const cpt::CostProfile& profile, const EvaluationOptions& options = {});

struct OptionReport {
    std::string label;
    cpt::CostSelector cost = cpt::CostSelector::mixed;
    double utility = 0.0;
    double mc_se = 0.0;
    double expected_value = 0.0; ///< plain (unweighted) expectation
    std::array<cpt::TailEntry, 3> tails{};
    std::size_t prospect_size = 0;
};

struct UtilityReport {
    std::string scenario;
    std::vector<OptionReport> options; ///< declared order
    std::size_t best = 0;              ///< index of the utility-maximizing option
    cpt::CostProfile profile;
    cpt::WeightingParams weighting;
    SubjectMode subject = SubjectMode::fresh;
    int n_rep = 1;
    std::uint64_t seed = 0;
};

UtilityReport evaluate_scenario(const Posterior& post, const Scenario& scenario, const cpt::CostProfile& profile,
                                const cpt::WeightingParams& weighting, const EvaluationOptions& options = {});

/// Same as evaluate_scenario, from counts already simulated per option.
UtilityReport evaluate_samples(const Scenario& scenario, const std::vector<std::vector<std::int64_t>>& counts,
                               const cpt::CostProfile& profile, const cpt::WeightingParams& weighting,
                               const EvaluationOptions& options = {});

enum class SweepParameter { savings, hourly_low, hourly_high, hourly_mixed, hours };

SweepParameter parse_sweep_parameter(const std::string& text);
std::string to_string(SweepParameter parameter);
cpt::CostProfile with_value(cpt::CostProfile profile, SweepParameter parameter, double value);

struct SweepRow {
    double value = 0.0;
    std::vector<double> utilities; ///< per option
    std::size_t best = 0;
};

struct SweepTable {
    std::string scenario;
    SweepParameter parameter = SweepParameter::savings;
    std::vector<std::string> labels;
    std::vector<SweepRow> rows;
};

/// One evaluation per value; predictive samples are simulated once and reused.
SweepTable sensitivity_sweep(const Posterior& post, const Scenario& scenario, const cpt::CostProfile& profile,
                             const cpt::WeightingParams& weighting, SweepParameter parameter,
                             const std::vector<double>& values, const EvaluationOptions& options = {});

} // namespace practsig::scenarios
