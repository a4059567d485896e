#include "practsig/model.hpp"

#include "practsig/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace practsig {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(inv_logit(x)) without cancellation.
double log_inv_logit(double x)
{
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

struct ZeroPart {
    double log_p;
    double log_1mp;
};

ZeroPart zero_part(const ParameterVector& params, int approach, const ModelSpec& spec)
{
    if (spec.kind == ModelKind::M1)
        return {neg_inf, 0.0};
    const double eta = params.alpha_p + params.beta_p * approach;
    if (spec.zi_link == ZeroInflationLink::logit)
        return {log_inv_logit(eta), log_inv_logit(-eta)};
    if (eta > 0.0)
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    return {eta, eta == 0.0 ? neg_inf : std::log1p(-std::exp(eta))};
}

double log_rate(const ParameterVector& params, const Observation& obs, const ModelSpec& spec)
{
    double eta = params.alpha + params.beta_a * obs.approach + params.beta_e * obs.experience;
    if (spec.kind == ModelKind::M2)
        eta += params.mu_s + params.sigma_s * params.z_subjects[static_cast<std::size_t>(obs.subject)];
    return eta;
}

double observation_term(const ParameterVector& params, const Observation& obs, const ModelSpec& spec)
{
    const double eta = log_rate(params, obs, spec);
    const ZeroPart zp = zero_part(params, obs.approach, spec);
    // Log link with p > 1 is outside the support.
    if (std::isnan(zp.log_p))
        return neg_inf;
    const double lambda = std::exp(eta);
    if (!std::isfinite(lambda) || !std::isfinite(eta))
        return neg_inf;
    if (obs.faults == 0)
        return log_sum_exp(zp.log_p, zp.log_1mp - lambda);
    if (zp.log_1mp == neg_inf)
        return neg_inf;
    const double k = static_cast<double>(obs.faults);
    return zp.log_1mp + k * eta - lambda - log_gamma(k + 1.0);
}

void check_dimensions(const ParameterVector& params, const Dataset& data, const ModelSpec& spec)
{
    if (spec.kind == ModelKind::M2 && params.z_subjects.size() != static_cast<std::size_t>(data.n_subjects()))
        throw DomainError("parameter vector has " + std::to_string(params.z_subjects.size()) +
                          " subject offsets, dataset has " + std::to_string(data.n_subjects()) + " subjects");
}

} // namespace

std::string to_string(ModelKind kind)
{
    return kind == ModelKind::M1 ? "m1" : "m2";
}

std::string to_string(ZeroInflationLink link)
{
    return link == ZeroInflationLink::logit ? "logit" : "log";
}

ModelKind parse_model_kind(const std::string& text)
{
    if (text == "m1" || text == "M1")
        return ModelKind::M1;
    if (text == "m2" || text == "M2")
        return ModelKind::M2;
    throw ConfigError("unknown model '" + text + "' (expected m1 or m2)");
}

ZeroInflationLink parse_zi_link(const std::string& text)
{
    if (text == "logit")
        return ZeroInflationLink::logit;
    if (text == "log")
        return ZeroInflationLink::log;
    throw ConfigError("unknown zero-inflation link '" + text + "' (expected logit or log)");
}

void ModelSpec::validate() const
{
    if (!(prior_sd > 0.0) || !(sigma_prior_scale > 0.0))
        throw ConfigError("prior scales must be positive");
}

Dataset::Dataset(std::vector<Observation> observations, int n_subjects)
    : observations_(std::move(observations)), n_subjects_(n_subjects)
{
    if (observations_.empty())
        throw InputError("dataset is empty");
    if (n_subjects_ <= 0)
        throw InputError("dataset must have at least one subject");
    if (static_cast<std::size_t>(n_subjects_) > observations_.size())
        throw InputError("more subjects than observations");
    rows_by_subject_.resize(static_cast<std::size_t>(n_subjects_));
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const Observation& o = observations_[i];
        const std::string row = "observation " + std::to_string(i + 1);
        if (o.subject < 0 || o.subject >= n_subjects_)
            throw InputError(row + ": subject id " + std::to_string(o.subject) + " out of range");
        if (o.approach != 0 && o.approach != 1)
            throw InputError(row + ": approach must be 0 or 1");
        if (o.experience != 0 && o.experience != 1)
            throw InputError(row + ": experience must be 0 or 1");
        if (o.faults < 0)
            throw InputError(row + ": negative fault count " + std::to_string(o.faults));
        rows_by_subject_[static_cast<std::size_t>(o.subject)].push_back(i);
    }
    for (int s = 0; s < n_subjects_; ++s)
        if (rows_by_subject_[static_cast<std::size_t>(s)].empty())
            throw InputError("subject " + std::to_string(s) + " has no observations");
}

Dataset Dataset::from_observations(std::vector<Observation> observations)
{
    int max_id = -1;
    for (const auto& o : observations)
        max_id = std::max(max_id, o.subject);
    return Dataset(std::move(observations), max_id + 1);
}

std::span<const std::size_t> Dataset::subject_rows(int subject) const
{
    return rows_by_subject_.at(static_cast<std::size_t>(subject));
}

std::uint64_t Dataset::fingerprint() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::int64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= static_cast<std::uint64_t>((v >> (8 * b)) & 0xff);
            h *= 0x100000001b3ULL;
        }
    };
    mix(n_subjects_);
    for (const auto& o : observations_) {
        mix(o.subject);
        mix(o.approach);
        mix(o.experience);
        mix(o.faults);
    }
    return h;
}

std::size_t population_dimension(const ModelSpec& spec)
{
    if (spec.kind == ModelKind::M1)
        return 3;
    return spec.estimate_subject_mean ? 7 : 6;
}

std::size_t parameter_dimension(const ModelSpec& spec, int n_subjects)
{
    if (spec.kind == ModelKind::M1)
        return 3;
    return population_dimension(spec) + static_cast<std::size_t>(n_subjects);
}

std::vector<std::string> parameter_names(const ModelSpec& spec, int n_subjects)
{
    std::vector<std::string> names{"alpha", "beta_a", "beta_e"};
    if (spec.kind == ModelKind::M1)
        return names;
    names.insert(names.end(), {"alpha_p", "beta_p"});
    if (spec.estimate_subject_mean)
        names.emplace_back("mu_s");
    names.emplace_back("sigma_s");
    for (int s = 0; s < n_subjects; ++s)
        names.push_back("z_" + std::to_string(s));
    return names;
}

std::vector<double> pack(const ParameterVector& params, const ModelSpec& spec)
{
    std::vector<double> out{params.alpha, params.beta_a, params.beta_e};
    if (spec.kind == ModelKind::M1)
        return out;
    out.insert(out.end(), {params.alpha_p, params.beta_p});
    if (spec.estimate_subject_mean)
        out.push_back(params.mu_s);
    out.push_back(params.sigma_s);
    out.insert(out.end(), params.z_subjects.begin(), params.z_subjects.end());
    return out;
}

namespace {

void unpack_into(std::span<const double> natural, const ModelSpec& spec, int n_subjects, ParameterVector& p)
{
    if (natural.size() != parameter_dimension(spec, n_subjects))
        throw DomainError("parameter vector has length " + std::to_string(natural.size()) + ", model expects " +
                          std::to_string(parameter_dimension(spec, n_subjects)));
    p.alpha = natural[0];
    p.beta_a = natural[1];
    p.beta_e = natural[2];
    if (spec.kind == ModelKind::M1) {
        p.alpha_p = p.beta_p = p.mu_s = 0.0;
        p.sigma_s = 1.0;
        p.z_subjects.clear();
        return;
    }
    std::size_t i = 3;
    p.alpha_p = natural[i++];
    p.beta_p = natural[i++];
    p.mu_s = spec.estimate_subject_mean ? natural[i++] : 0.0;
    p.sigma_s = natural[i++];
    p.z_subjects.assign(natural.begin() + static_cast<std::ptrdiff_t>(i), natural.end());
}

/// Sum in ascending order, so the result does not depend on row order.
double order_free_sum(std::vector<double>& terms)
{
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double t : terms)
        total += t;
    return total;
}

} // namespace

ParameterVector unpack(std::span<const double> natural, const ModelSpec& spec, int n_subjects)
{
    ParameterVector p;
    unpack_into(natural, spec, n_subjects, p);
    return p;
}

void from_unconstrained_into(std::span<const double> x, const ModelSpec& spec, int n_subjects, ParameterVector& out,
                             double* log_jacobian)
{
    unpack_into(x, spec, n_subjects, out);
    double jac = 0.0;
    if (spec.kind == ModelKind::M2) {
        jac = out.sigma_s;
        out.sigma_s = std::exp(out.sigma_s);
    }
    if (log_jacobian)
        *log_jacobian = jac;
}

ParameterVector from_unconstrained(std::span<const double> x, const ModelSpec& spec, int n_subjects,
                                   double* log_jacobian)
{
    ParameterVector p;
    from_unconstrained_into(x, spec, n_subjects, p, log_jacobian);
    return p;
}

std::vector<double> to_unconstrained(const ParameterVector& params, const ModelSpec& spec)
{
    std::vector<double> x = pack(params, spec);
    if (spec.kind == ModelKind::M2)
        x[population_dimension(spec) - 1] = std::log(params.sigma_s);
    return x;
}

LinearPredictors linear_predictors(const ParameterVector& params, const Observation& obs, const ModelSpec& spec)
{
    double eta = params.alpha + params.beta_a * obs.approach + params.beta_e * obs.experience;
    if (spec.kind == ModelKind::M1)
        return {Rate(std::exp(eta)), Probability(0.0)};
    if (static_cast<std::size_t>(obs.subject) >= params.z_subjects.size() || obs.subject < 0)
        throw DomainError("no subject offset for subject " + std::to_string(obs.subject));
    eta += params.subject_intercept(obs.subject);
    const double eta_p = params.alpha_p + params.beta_p * obs.approach;
    const double p = spec.zi_link == ZeroInflationLink::logit ? inv_logit(eta_p) : std::exp(eta_p);
    return {Rate(std::exp(eta)), Probability(p)};
}

LogLikelihood log_likelihood(const ParameterVector& params, const Dataset& data, const ModelSpec& spec)
{
    check_dimensions(params, data, spec);
    LogLikelihood ll;
    ll.per_observation.reserve(data.size());
    for (const auto& obs : data.observations())
        ll.per_observation.push_back(observation_term(params, obs, spec));
    thread_local std::vector<double> scratch;
    scratch = ll.per_observation;
    ll.total = order_free_sum(scratch);
    return ll;
}

double log_likelihood_rows(const ParameterVector& params, const Dataset& data, const ModelSpec& spec,
                           std::span<const std::size_t> rows)
{
    check_dimensions(params, data, spec);
    thread_local std::vector<double> terms;
    terms.clear();
    for (std::size_t r : rows)
        terms.push_back(observation_term(params, data.observations()[r], spec));
    return order_free_sum(terms);
}

double log_prior(const ParameterVector& params, const ModelSpec& spec)
{
    const double sd = spec.prior_sd;
    double lp = normal_logpdf(params.alpha, 0.0, sd) + normal_logpdf(params.beta_a, 0.0, sd) +
                normal_logpdf(params.beta_e, 0.0, sd);
    if (spec.kind == ModelKind::M1)
        return lp;
    if (!(params.sigma_s > 0.0) || !std::isfinite(params.sigma_s))
        return neg_inf;
    lp += normal_logpdf(params.alpha_p, 0.0, sd) + normal_logpdf(params.beta_p, 0.0, sd) +
          normal_logpdf(params.mu_s, 0.0, sd);
    lp += half_cauchy_logpdf(params.sigma_s, spec.sigma_prior_scale);
    for (double z : params.z_subjects)
        lp += normal_logpdf(z, 0.0, 1.0);
    return lp;
}

double log_posterior(const ParameterVector& params, const Dataset& data, const ModelSpec& spec)
{
    const double lp = log_prior(params, spec);
    if (lp == neg_inf)
        return neg_inf;
    const double ll = log_likelihood(params, data, spec).total;
    if (ll == neg_inf)
        return neg_inf;
    return lp + ll;
}

} // namespace practsig
