#include "practsig/synthetic.hpp"

#include "practsig/distributions.hpp"
#include "practsig/error.hpp"
#include "practsig/stats.hpp"

#include <algorithm>
#include <cmath>

namespace practsig::synthetic {

DesignSpec DesignSpec::paper(int scale)
{
    if (scale < 1)
        throw ConfigError("design scale must be positive");
    DesignSpec d;
    d.cells = {{0, 0, 6 * scale}, {1, 0, 6 * scale}, {0, 1, 12 * scale}, {1, 1, 11 * scale}};
    return d;
}

int DesignSpec::n_subjects() const
{
    int n = 0;
    for (const auto& c : cells)
        n += c.subjects;
    return n;
}

void DesignSpec::validate() const
{
    if (cells.empty() || n_subjects() < 1)
        throw ConfigError("design has no subjects");
    if (sessions_per_subject < 1)
        throw ConfigError("sessions per subject must be positive");
    for (const auto& c : cells) {
        if ((c.approach != 0 && c.approach != 1) || (c.experience != 0 && c.experience != 1))
            throw ConfigError("design cell indicators must be 0 or 1");
        if (c.subjects < 0)
            throw ConfigError("design cell subject counts must be nonnegative");
    }
}

ParameterVector paper_means()
{
    ParameterVector p;
    p.alpha = 1.95;
    p.beta_a = -1.47;
    p.beta_e = 0.33;
    p.alpha_p = -4.61;
    p.beta_p = 3.39;
    p.mu_s = 0.0;
    p.sigma_s = 0.29;
    return p;
}

GeneratedData generate_with_intercepts(const ParameterVector& truth, const DesignSpec& design,
                                       const ModelSpec& spec, std::uint64_t seed)
{
    design.validate();
    for (double v : {truth.alpha, truth.beta_a, truth.beta_e, truth.alpha_p, truth.beta_p, truth.mu_s})
        if (!std::isfinite(v))
            throw DomainError("truth parameters must be finite");
    const bool m2 = spec.kind == ModelKind::M2;
    if (m2 && (!(truth.sigma_s >= 0.0) || !std::isfinite(truth.sigma_s)))
        throw DomainError("truth sigma_s must be nonnegative and finite");

    Rng rng = make_rng(seed, 0);
    std::vector<Observation> rows;
    std::vector<double> intercepts;
    int subject = 0;
    for (const auto& cell : design.cells) {
        for (int k = 0; k < cell.subjects; ++k, ++subject) {
            double intercept = 0.0;
            if (m2) {
                intercept = truth.sigma_s > 0.0 ? sample_normal(truth.mu_s, truth.sigma_s, rng) : truth.mu_s;
                intercepts.push_back(intercept);
            }
            const double eta = truth.alpha + truth.beta_a * cell.approach + truth.beta_e * cell.experience + intercept;
            double p = 0.0;
            if (m2) {
                const double eta_p = truth.alpha_p + truth.beta_p * cell.approach;
                p = spec.zi_link == ZeroInflationLink::logit ? inv_logit(eta_p) : std::exp(eta_p);
            }
            for (int s = 0; s < design.sessions_per_subject; ++s)
                rows.push_back({subject, cell.approach, cell.experience, sample_zip(std::exp(eta), p, rng)});
        }
    }
    return {Dataset(std::move(rows), subject), std::move(intercepts)};
}

Dataset generate(const ParameterVector& truth, const DesignSpec& design, const ModelSpec& spec, std::uint64_t seed)
{
    return generate_with_intercepts(truth, design, spec, seed).data;
}

namespace {

GroupStats group_stats(std::string name, std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    GroupStats g;
    g.group = std::move(name);
    g.n = values.size();
    g.median = stats::quantile_sorted(values, 0.5);
    g.mean = stats::mean(values);
    if (values.size() > 1)
        g.sd = stats::sd(values);
    g.min = values.front();
    g.max = values.back();
    return g;
}

} // namespace

std::vector<GroupStats> summary_stats(const Dataset& data)
{
    std::vector<double> low;
    std::vector<double> high;
    std::vector<double> any;
    for (const auto& o : data.observations()) {
        const auto f = static_cast<double>(o.faults);
        (o.experience == 0 ? low : high).push_back(f);
        any.push_back(f);
    }
    std::vector<GroupStats> out;
    if (!low.empty())
        out.push_back(group_stats("low", std::move(low)));
    if (!high.empty())
        out.push_back(group_stats("high", std::move(high)));
    out.push_back(group_stats("any", std::move(any)));
    return out;
}

} // namespace practsig::synthetic
