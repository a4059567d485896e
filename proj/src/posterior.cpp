#include "practsig/posterior.hpp"

#include "practsig/distributions.hpp"
#include "practsig/error.hpp"
#include "practsig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace practsig {

Posterior Posterior::from_draws(mcmc::Draws draws, const ModelSpec& model, const DataFingerprint& data,
                                std::uint64_t seed)
{
    const auto expected = parameter_names(model, data.n_subjects);
    if (draws.names != expected)
        throw InputError("draw columns do not match the " + to_string(model.kind) + " layout for " +
                         std::to_string(data.n_subjects) + " subjects");
    if (draws.total_draws() == 0)
        throw InputError("posterior has no draws");
    Posterior post;
    post.diagnostics = mcmc::diagnose(draws);
    post.draws = std::move(draws);
    post.model = model;
    post.data = data;
    post.seed = seed;
    return post;
}

ParameterVector Posterior::parameters(std::size_t pooled_draw) const
{
    return unpack(draws.row(pooled_draw), model, data.n_subjects);
}

ModelTarget::ModelTarget(const Dataset& data, const ModelSpec& spec, int population_repeats)
    : data_(data), spec_(spec), population_repeats_(population_repeats)
{
    spec_.validate();
}

std::size_t ModelTarget::dimension() const
{
    return parameter_dimension(spec_, data_.n_subjects());
}

double ModelTarget::log_density(std::span<const double> x) const
{
    thread_local ParameterVector params;
    double jac = 0.0;
    from_unconstrained_into(x, spec_, data_.n_subjects(), params, &jac);
    const double lp = log_posterior(params, data_, spec_);
    return lp == -std::numeric_limits<double>::infinity() ? lp : lp + jac;
}

double ModelTarget::block_log_density(std::size_t block, std::span<const double> x) const
{
    if (block == 0 || block > static_cast<std::size_t>(data_.n_subjects()))
        return log_density(x);
    // Subject block: the z prior plus that subject's rows are the only
    // terms that depend on z_subject.
    thread_local ParameterVector params;
    from_unconstrained_into(x, spec_, data_.n_subjects(), params);
    const int subject = static_cast<int>(block - 1);
    const double z = params.z_subjects[static_cast<std::size_t>(subject)];
    return -0.5 * z * z + log_likelihood_rows(params, data_, spec_, data_.subject_rows(subject));
}

std::vector<mcmc::Block> ModelTarget::blocks() const
{
    std::vector<mcmc::Block> out;
    mcmc::Block population;
    for (std::size_t i = 0; i < population_dimension(spec_); ++i)
        population.indices.push_back(i);
    population.repeats = population_repeats_;
    out.push_back(std::move(population));
    if (spec_.kind == ModelKind::M2)
        for (int s = 0; s < data_.n_subjects(); ++s)
            out.push_back(mcmc::Block{{population_dimension(spec_) + static_cast<std::size_t>(s)}, 3});
    if (spec_.kind == ModelKind::M2) {
        // sigma_s against all offsets at fixed subject intercepts
        mcmc::Block rescale;
        rescale.kind = mcmc::BlockKind::rescale;
        rescale.indices.push_back(population_dimension(spec_) - 1);
        for (int s = 0; s < data_.n_subjects(); ++s)
            rescale.indices.push_back(population_dimension(spec_) + static_cast<std::size_t>(s));
        rescale.repeats = 8;
        mcmc::Block shift;
        shift.kind = mcmc::BlockKind::transform;
        shift.indices = rescale.indices;
        shift.indices[0] = 0;
        shift.repeats = 5;
        out.push_back(std::move(rescale));
        out.push_back(std::move(shift));
    }
    return out;
}

double ModelTarget::transform(std::size_t, std::span<const double> x, double e, std::span<double> out) const
{
    // alpha + e, z - e / sigma_s: alpha + mu_s + sigma_s * z is unchanged
    const std::size_t pop = population_dimension(spec_);
    const double shift = e / std::exp(x[pop - 1]);
    out[0] = x[0] + e;
    for (std::size_t i = pop; i < x.size(); ++i)
        out[i] = x[i] - shift;
    return 0.0;
}

std::vector<double> ModelTarget::initial_point(Rng& rng) const
{
    std::uniform_real_distribution<double> population(-2.0, 2.0);
    std::uniform_real_distribution<double> log_sigma(-2.0, 0.0);
    std::normal_distribution<double> offset(0.0, 0.1);
    const std::size_t pop = population_dimension(spec_);
    std::vector<double> x(dimension());
    for (std::size_t i = 0; i < pop; ++i)
        x[i] = population(rng);
    if (spec_.kind == ModelKind::M2) {
        x[pop - 1] = log_sigma(rng);
        for (std::size_t i = pop; i < x.size(); ++i)
            x[i] = offset(rng);
    }
    return x;
}

std::vector<std::string> ModelTarget::names() const
{
    return parameter_names(spec_, data_.n_subjects());
}

void ModelTarget::constrain(std::span<const double> x, std::span<double> out) const
{
    std::copy(x.begin(), x.end(), out.begin());
    if (spec_.kind == ModelKind::M2) {
        const std::size_t sigma = population_dimension(spec_) - 1;
        out[sigma] = std::exp(x[sigma]);
    }
}

Posterior fit(const Dataset& data, const ModelSpec& spec, const mcmc::SamplerConfig& config)
{
    const ModelTarget target(data, spec);
    mcmc::Draws draws = mcmc::run_mcmc(target, config);
    return Posterior::from_draws(std::move(draws), spec, DataFingerprint::of(data), config.seed);
}

std::vector<SummaryRow> summarize(const mcmc::Draws& draws, double ci_level)
{
    if (!(ci_level > 0.0 && ci_level <= 1.0))
        throw ConfigError("ci level must lie in (0, 1]");
    std::vector<SummaryRow> rows;
    for (std::size_t p = 0; p < draws.dimension(); ++p) {
        const auto col = draws.column(p);
        const auto ci = stats::equal_tailed(col, ci_level);
        rows.push_back({draws.names[p], stats::mean(col), stats::sd(col), ci.lo, ci.hi});
    }
    return rows;
}

std::vector<SummaryRow> summarize(const Posterior& post, double ci_level, bool include_subject_offsets)
{
    auto rows = summarize(post.draws, ci_level);
    if (!include_subject_offsets)
        rows.resize(std::min(rows.size(), population_dimension(post.model)));
    return rows;
}

MarginalDensity marginal_density(std::span<const double> samples, int bins, double ci_level)
{
    if (bins < 10)
        throw ConfigError("marginal density needs at least 10 bins");
    if (samples.empty())
        throw InputError("marginal density of an empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    MarginalDensity m;
    double lo = sorted.front();
    double hi = sorted.back();
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b)
        m.edges.push_back(lo + width * b);
    m.edges.back() = hi;
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : sorted) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, counts.size() - 1)] += 1.0;
    }
    const double n = static_cast<double>(sorted.size());
    for (std::size_t b = 0; b < counts.size(); ++b)
        m.heights.push_back(counts[b] / (n * (m.edges[b + 1] - m.edges[b])));
    m.median = stats::quantile_sorted(sorted, 0.5);
    const double tail = 0.5 * (1.0 - ci_level);
    m.ci_lo = stats::quantile_sorted(sorted, tail);
    m.ci_hi = stats::quantile_sorted(sorted, 1.0 - tail);
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin();
    m.prob_below_zero = static_cast<double>(below) / n;
    return m;
}

MarginalDensity marginal_density(const Posterior& post, const std::string& parameter, int bins, double ci_level)
{
    auto m = marginal_density(post.draws.column(post.draws.index_of(parameter)), bins, ci_level);
    m.parameter = parameter;
    return m;
}

void PredictorSetting::validate() const
{
    if (!(testcase_weight >= 0.0 && testcase_weight <= 1.0) ||
        !(high_experience_weight >= 0.0 && high_experience_weight <= 1.0))
        throw ConfigError("predictor mixture weights must lie in [0, 1]");
}

MixtureComposition MixtureComposition::design_table()
{
    return {23.0 / 35.0, 0.5};
}

MixtureComposition MixtureComposition::cost_text()
{
    return {12.0 / 35.0, 0.5};
}

MixtureComposition MixtureComposition::from_dataset(const Dataset& data)
{
    double high = 0.0;
    double testcase = 0.0;
    for (const auto& o : data.observations()) {
        high += o.experience;
        testcase += o.approach;
    }
    const double n = static_cast<double>(data.size());
    return {high / n, testcase / n};
}

MixtureComposition MixtureComposition::parse(const std::string& name)
{
    if (name == "table" || name == "design")
        return design_table();
    if (name == "text")
        return cost_text();
    throw ConfigError("unknown mixture composition '" + name + "' (expected table, text, or dataset)");
}

PredictorSetting parse_setting(const std::string& name, const MixtureComposition& mix)
{
    const double a_mix = mix.testcase;
    const double e_mix = mix.high_experience;
    if (name == "exploratory")
        return {0.0, e_mix};
    if (name == "testcase")
        return {1.0, e_mix};
    if (name == "low")
        return {a_mix, 0.0};
    if (name == "high")
        return {a_mix, 1.0};
    if (name == "exploratory-low")
        return {0.0, 0.0};
    if (name == "exploratory-high")
        return {0.0, 1.0};
    if (name == "testcase-low")
        return {1.0, 0.0};
    if (name == "testcase-high")
        return {1.0, 1.0};
    if (name == "mixed")
        return {a_mix, e_mix};
    throw ConfigError("unknown predictor setting '" + name + "'");
}

std::vector<double> PredictiveDistribution::samples() const
{
    if (mode == PredictiveMode::expectation)
        return expected;
    return {counts.begin(), counts.end()};
}

namespace {

struct CellTerms {
    double log_rate;
    double p;
};

CellTerms cell_terms(const ParameterVector& theta, const ModelSpec& spec, int approach, int experience, double z)
{
    double eta = theta.alpha + theta.beta_a * approach + theta.beta_e * experience;
    double p = 0.0;
    if (spec.kind == ModelKind::M2) {
        eta += theta.mu_s + theta.sigma_s * z;
        const double eta_p = theta.alpha_p + theta.beta_p * approach;
        p = spec.zi_link == ZeroInflationLink::logit ? inv_logit(eta_p) : std::min(1.0, std::exp(eta_p));
    }
    return {eta, p};
}

} // namespace

PredictiveDistribution posterior_predictive(const Posterior& post, const PredictorSetting& setting,
                                            const PredictiveOptions& options)
{
    setting.validate();
    if (options.n_rep < 1)
        throw ConfigError("n_rep must be positive");
    PredictiveDistribution pd;
    pd.mode = options.mode;
    pd.setting = setting;

    Rng rng = make_rng(options.seed, 0x9e37);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const bool fresh = post.model.kind == ModelKind::M2 && options.subject == SubjectMode::fresh;
    const double wa[2] = {1.0 - setting.testcase_weight, setting.testcase_weight};
    const double we[2] = {1.0 - setting.high_experience_weight, setting.high_experience_weight};

    const std::size_t n = post.size();
    if (options.mode == PredictiveMode::expectation)
        pd.expected.reserve(n);
    else
        pd.counts.reserve(n * static_cast<std::size_t>(options.n_rep));

    for (std::size_t s = 0; s < n; ++s) {
        const ParameterVector theta = post.parameters(s);
        if (options.mode == PredictiveMode::expectation) {
            const double z = fresh ? normal(rng) : 0.0;
            double e = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int x = 0; x < 2; ++x) {
                    const double w = wa[a] * we[x];
                    if (w == 0.0)
                        continue;
                    const CellTerms t = cell_terms(theta, post.model, a, x, z);
                    e += w * (1.0 - t.p) * std::exp(t.log_rate);
                }
            pd.expected.push_back(e);
            continue;
        }
        for (int r = 0; r < options.n_rep; ++r) {
            const int a = uniform(rng) < setting.testcase_weight ? 1 : 0;
            const int x = uniform(rng) < setting.high_experience_weight ? 1 : 0;
            const double z = fresh ? normal(rng) : 0.0;
            const CellTerms t = cell_terms(theta, post.model, a, x, z);
            pd.counts.push_back(sample_zip(std::exp(t.log_rate), t.p, rng));
        }
    }
    return pd;
}

PredictiveInterval predictive_interval(const PredictiveDistribution& pd, double level)
{
    if (!(level > 0.0 && level <= 1.0))
        throw ConfigError("interval level must lie in (0, 1]");
    std::vector<double> s = pd.samples();
    if (s.empty())
        throw InputError("empty predictive distribution");
    std::sort(s.begin(), s.end());
    const double tail = 0.5 * (1.0 - level);
    PredictiveInterval out;
    out.mean = stats::mean(s);
    if (pd.mode == PredictiveMode::outcome) {
        out.lo = stats::quantile_inverse_cdf_sorted(s, tail);
        out.hi = stats::quantile_inverse_cdf_sorted(s, 1.0 - tail);
    } else {
        out.lo = stats::quantile_sorted(s, tail);
        out.hi = stats::quantile_sorted(s, 1.0 - tail);
    }
    return out;
}

std::string to_string(PredictiveMode mode)
{
    return mode == PredictiveMode::expectation ? "expectation" : "outcome";
}

std::string to_string(SubjectMode mode)
{
    return mode == SubjectMode::fresh ? "fresh" : "average";
}

PredictiveMode parse_predictive_mode(const std::string& text)
{
    if (text == "expectation")
        return PredictiveMode::expectation;
    if (text == "outcome")
        return PredictiveMode::outcome;
    throw ConfigError("unknown predictive mode '" + text + "' (expected expectation or outcome)");
}

SubjectMode parse_subject_mode(const std::string& text)
{
    if (text == "fresh")
        return SubjectMode::fresh;
    if (text == "average" || text == "average-subject")
        return SubjectMode::average;
    throw ConfigError("unknown subject mode '" + text + "' (expected fresh or average)");
}

} // namespace practsig
