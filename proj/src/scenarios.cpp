#include "practsig/scenarios.hpp"

#include "practsig/error.hpp"
#include "practsig/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace practsig::scenarios {

void Scenario::validate() const
{
    if (options.size() < 2)
        throw ConfigError("scenario '" + name + "' needs at least two options");
    for (const auto& o : options)
        o.setting.validate();
}

Scenario preset(const std::string& name, const MixtureComposition& mix)
{
    using cpt::CostSelector;
    if (name == "approach")
        return {name,
                {{"exploratory", parse_setting("exploratory", mix), CostSelector::mixed},
                 {"test-case", parse_setting("testcase", mix), CostSelector::mixed}}};
    if (name == "experience")
        return {name,
                {{"low", parse_setting("low", mix), CostSelector::low},
                 {"high", parse_setting("high", mix), CostSelector::high}}};
    if (name == "exploratory")
        return {name,
                {{"low+exploratory", parse_setting("exploratory-low", mix), CostSelector::low},
                 {"high+exploratory", parse_setting("exploratory-high", mix), CostSelector::high}}};
    throw ConfigError("unknown scenario '" + name + "' (expected approach, experience, or exploratory)");
}

std::vector<std::string> preset_names()
{
    return {"approach", "experience", "exploratory"};
}

cpt::Prospect prospect_from_counts(std::span<const std::int64_t> counts, double savings_per_fault,
                                   double hourly_cost, double hours)
{
    if (counts.empty())
        throw InputError("no predictive samples to build a prospect from");
    std::map<std::int64_t, std::size_t> pmf;
    for (auto c : counts)
        ++pmf[c];
    cpt::Prospect prospect;
    const double n = static_cast<double>(counts.size());
    for (const auto& [count, freq] : pmf)
        prospect.outcomes.push_back(
            {cpt::value(count, savings_per_fault, hourly_cost, hours), static_cast<double>(freq) / n});
    return prospect;
}

std::vector<std::int64_t> simulate_counts(const Posterior& post, const PredictorSetting& setting,
                                          const EvaluationOptions& options)
{
    const std::uint64_t setting_key = derive_seed(std::bit_cast<std::uint64_t>(setting.testcase_weight),
                                                  std::bit_cast<std::uint64_t>(setting.high_experience_weight));
    PredictiveOptions po;
    po.mode = PredictiveMode::outcome;
    po.subject = options.subject;
    po.n_rep = options.n_rep;
    po.seed = derive_seed(options.seed, setting_key);
    return posterior_predictive(post, setting, po).counts;
}

cpt::Prospect build_prospect(const Posterior& post, const PredictorSetting& setting, cpt::CostSelector cost,
                             const cpt::CostProfile& profile, const EvaluationOptions& options)
{
    profile.validate();
    const auto counts = simulate_counts(post, setting, options);
    return prospect_from_counts(counts, profile.savings_per_fault, cpt::hourly_cost(profile, cost),
                                profile.session_hours);
}

namespace {

OptionReport report_option(const ScenarioOption& option, std::span<const std::int64_t> counts,
                           const cpt::CostProfile& profile, const cpt::WeightingParams& weighting,
                           const EvaluationOptions& options)
{
    const double cost = cpt::hourly_cost(profile, option.cost);
    const auto prospect = prospect_from_counts(counts, profile.savings_per_fault, cost, profile.session_hours);
    OptionReport r;
    r.label = option.label;
    r.cost = option.cost;
    r.utility = cpt::expected_utility(prospect, weighting);
    r.expected_value = prospect.expectation();
    r.tails = cpt::tail_breakdown(prospect, options.split);
    r.prospect_size = prospect.outcomes.size();

    const std::size_t batches = static_cast<std::size_t>(std::max(2, options.batches));
    const std::size_t per_batch = counts.size() / batches;
    if (per_batch >= 2) {
        std::vector<double> batch_utility;
        for (std::size_t b = 0; b < batches; ++b) {
            const auto slice = counts.subspan(b * per_batch, per_batch);
            batch_utility.push_back(cpt::expected_utility(
                prospect_from_counts(slice, profile.savings_per_fault, cost, profile.session_hours), weighting));
        }
        r.mc_se = stats::sd(batch_utility) / std::sqrt(static_cast<double>(batches));
    }
    return r;
}

} // namespace

UtilityReport evaluate_samples(const Scenario& scenario, const std::vector<std::vector<std::int64_t>>& counts,
                               const cpt::CostProfile& profile, const cpt::WeightingParams& weighting,
                               const EvaluationOptions& options)
{
    scenario.validate();
    profile.validate();
    weighting.validate();
    if (counts.size() != scenario.options.size())
        throw InputError("one sample vector per scenario option is required");
    UtilityReport report;
    report.scenario = scenario.name;
    report.profile = profile;
    report.weighting = weighting;
    report.subject = options.subject;
    report.n_rep = options.n_rep;
    report.seed = options.seed;
    for (std::size_t i = 0; i < counts.size(); ++i)
        report.options.push_back(report_option(scenario.options[i], counts[i], profile, weighting, options));
    for (std::size_t i = 1; i < report.options.size(); ++i)
        if (report.options[i].utility > report.options[report.best].utility)
            report.best = i;
    return report;
}

UtilityReport evaluate_scenario(const Posterior& post, const Scenario& scenario, const cpt::CostProfile& profile,
                                const cpt::WeightingParams& weighting, const EvaluationOptions& options)
{
    scenario.validate();
    std::vector<std::vector<std::int64_t>> counts;
    for (const auto& o : scenario.options)
        counts.push_back(simulate_counts(post, o.setting, options));
    return evaluate_samples(scenario, counts, profile, weighting, options);
}

SweepParameter parse_sweep_parameter(const std::string& text)
{
    if (text == "S")
        return SweepParameter::savings;
    if (text == "C-" || text == "C_low" || text == "Clow")
        return SweepParameter::hourly_low;
    if (text == "C+" || text == "C_high" || text == "Chigh")
        return SweepParameter::hourly_high;
    if (text == "Cbar" || text == "C_mixed" || text == "Cmixed")
        return SweepParameter::hourly_mixed;
    if (text == "h")
        return SweepParameter::hours;
    throw ConfigError("unknown sweep parameter '" + text + "' (expected S, C_low, C_high, C_mixed, or h)");
}

std::string to_string(SweepParameter parameter)
{
    switch (parameter) {
    case SweepParameter::savings:
        return "S";
    case SweepParameter::hourly_low:
        return "C_low";
    case SweepParameter::hourly_high:
        return "C_high";
    case SweepParameter::hourly_mixed:
        return "C_mixed";
    case SweepParameter::hours:
        return "h";
    }
    return "S";
}

cpt::CostProfile with_value(cpt::CostProfile profile, SweepParameter parameter, double value)
{
    switch (parameter) {
    case SweepParameter::savings:
        profile.savings_per_fault = value;
        break;
    case SweepParameter::hourly_low:
        profile.hourly_low = value;
        break;
    case SweepParameter::hourly_high:
        profile.hourly_high = value;
        break;
    case SweepParameter::hourly_mixed:
        profile.hourly_mixed = value;
        break;
    case SweepParameter::hours:
        profile.session_hours = value;
        break;
    }
    return profile;
}

SweepTable sensitivity_sweep(const Posterior& post, const Scenario& scenario, const cpt::CostProfile& profile,
                             const cpt::WeightingParams& weighting, SweepParameter parameter,
                             const std::vector<double>& values, const EvaluationOptions& options)
{
    scenario.validate();
    if (values.empty())
        throw ConfigError("sweep needs at least one value");
    std::vector<std::vector<std::int64_t>> counts;
    for (const auto& o : scenario.options)
        counts.push_back(simulate_counts(post, o.setting, options));

    SweepTable table;
    table.scenario = scenario.name;
    table.parameter = parameter;
    for (const auto& o : scenario.options)
        table.labels.push_back(o.label);
    for (double v : values) {
        const auto report = evaluate_samples(scenario, counts, with_value(profile, parameter, v), weighting, options);
        SweepRow row;
        row.value = v;
        for (const auto& o : report.options)
            row.utilities.push_back(o.utility);
        row.best = report.best;
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace practsig::scenarios
