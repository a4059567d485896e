#include "practsig/model_compare.hpp"

#include "practsig/error.hpp"
#include "practsig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace practsig {

namespace {

double log_sum_exp(std::span<const double> xs)
{
    const double m = *std::max_element(xs.begin(), xs.end());
    if (m == -std::numeric_limits<double>::infinity())
        return m;
    double s = 0.0;
    for (double x : xs)
        s += std::exp(x - m);
    return m + std::log(s);
}

double log_mean_exp(std::span<const double> xs)
{
    return log_sum_exp(xs) - std::log(static_cast<double>(xs.size()));
}

double pointwise_se(std::span<const double> pointwise)
{
    return std::sqrt(static_cast<double>(pointwise.size()) * stats::variance(pointwise));
}

} // namespace

LogLikMatrix::LogLikMatrix(std::string label, std::size_t draws, std::size_t observations, std::vector<double> values)
    : label_(std::move(label)), draws_(draws), observations_(observations), values_(std::move(values))
{
    if (values_.size() != draws_ * observations_)
        throw InputError("log-likelihood matrix '" + label_ + "' has inconsistent dimensions");
    for (double v : values_)
        if (!std::isfinite(v))
            throw InputError("log-likelihood matrix '" + label_ + "' contains non-finite entries");
}

std::vector<double> LogLikMatrix::observation(std::size_t obs) const
{
    std::vector<double> out(draws_);
    for (std::size_t s = 0; s < draws_; ++s)
        out[s] = (*this)(s, obs);
    return out;
}

LogLikMatrix pointwise_log_likelihood(const Posterior& post, const Dataset& data, std::string label)
{
    // hash 0: fitted data unknown (draws loaded without metadata)
    const bool hash_mismatch = post.data.hash != 0 && data.fingerprint() != post.data.hash;
    const bool subject_mismatch = post.model.kind == ModelKind::M2 && data.n_subjects() != post.data.n_subjects;
    if (hash_mismatch || subject_mismatch)
        throw InputError("dataset does not match the data the posterior '" + label + "' was fitted on");
    std::vector<double> values;
    values.reserve(post.size() * data.size());
    for (std::size_t s = 0; s < post.size(); ++s) {
        const auto ll = log_likelihood(post.parameters(s), data, post.model);
        values.insert(values.end(), ll.per_observation.begin(), ll.per_observation.end());
    }
    return LogLikMatrix(std::move(label), post.size(), data.size(), std::move(values));
}

WaicResult waic(const LogLikMatrix& ll)
{
    if (ll.draws() < 2)
        throw InputError("waic needs at least two draws");
    WaicResult r;
    for (std::size_t i = 0; i < ll.observations(); ++i) {
        const auto col = ll.observation(i);
        const double lppd = log_mean_exp(col);
        const double p = stats::variance(col);
        r.lppd += lppd;
        r.p_eff += p;
        r.pointwise_elpd.push_back(lppd - p);
    }
    r.elpd = r.lppd - r.p_eff;
    r.se = pointwise_se(r.pointwise_elpd);
    return r;
}

double gpd_quantile(double p, double k, double sigma)
{
    if (!(sigma > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    if (k == 0.0)
        return -sigma * std::log1p(-p);
    return sigma * std::expm1(-k * std::log1p(-p)) / k;
}

std::optional<ParetoFit> fit_generalized_pareto(std::span<const double> exceedances)
{
    const std::size_t n = exceedances.size();
    if (n < 5)
        throw InputError("generalized Pareto fit needs at least 5 exceedances");
    std::vector<double> x(exceedances.begin(), exceedances.end());
    std::sort(x.begin(), x.end());
    if (x.back() - x.front() <= 0.0 || !(x.back() > 0.0))
        return std::nullopt;

    constexpr double prior = 3.0;
    const std::size_t m = 30 + static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const double xstar = x[static_cast<std::size_t>(std::floor(static_cast<double>(n) / 4.0 + 0.5)) - 1];
    std::vector<double> theta(m);
    std::vector<double> log_lik(m);
    for (std::size_t j = 0; j < m; ++j) {
        theta[j] = 1.0 / x.back() + (1.0 - std::sqrt(static_cast<double>(m) / (static_cast<double>(j) + 0.5))) /
                                        prior / xstar;
        // Profile log-likelihood of theta.
        const double a = -theta[j];
        double kk = 0.0;
        for (double xi : x)
            kk += std::log1p(a * xi);
        kk /= static_cast<double>(n);
        log_lik[j] = static_cast<double>(n) * (std::log(a / kk) - kk - 1.0);
    }
    const double norm = log_sum_exp(log_lik);
    double theta_hat = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        theta_hat += theta[j] * std::exp(log_lik[j] - norm);

    double k = 0.0;
    for (double xi : x)
        k += std::log1p(-theta_hat * xi);
    k /= static_cast<double>(n);
    const double sigma = -k / theta_hat;
    // Shrink toward 0.5 as if 10 extra observations were seen.
    const double nd = static_cast<double>(n);
    k = k * nd / (nd + 10.0) + 10.0 * 0.5 / (nd + 10.0);
    if (!std::isfinite(k) || !(sigma > 0.0))
        return std::nullopt;
    return ParetoFit{k, sigma};
}

PsisWeights psis_smooth(std::span<const double> log_ratios)
{
    const std::size_t s = log_ratios.size();
    if (s == 0)
        throw InputError("psis: no draws");
    const double max_lr = *std::max_element(log_ratios.begin(), log_ratios.end());
    std::vector<double> lw(s);
    for (std::size_t i = 0; i < s; ++i)
        lw[i] = log_ratios[i] - max_lr;

    PsisWeights out;
    const double sd = static_cast<double>(s);
    const auto tail_len = static_cast<std::size_t>(std::ceil(std::min(0.2 * sd, 3.0 * std::sqrt(sd))));
    if (tail_len >= 5 && tail_len < s) {
        std::vector<std::size_t> order(s);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lw[a] < lw[b]; });
        const std::size_t first_tail = s - tail_len;
        const double cutoff = lw[order[first_tail - 1]];
        const double exp_cutoff = std::exp(cutoff);
        std::vector<double> exceed;
        for (std::size_t i = first_tail; i < s; ++i)
            exceed.push_back(std::exp(lw[order[i]]) - exp_cutoff);
        const double tail_span = lw[order[s - 1]] - lw[order[first_tail]];
        if (tail_span > std::numeric_limits<double>::epsilon() / 100.0) {
            if (const auto fit = fit_generalized_pareto(exceed)) {
                for (std::size_t j = 0; j < tail_len; ++j) {
                    const double p = (static_cast<double>(j) + 0.5) / static_cast<double>(tail_len);
                    lw[order[first_tail + j]] = std::log(gpd_quantile(p, fit->k, fit->sigma) + exp_cutoff);
                }
                out.pareto_k = fit->k;
            }
        }
    }
    // Truncate at the largest raw weight.
    for (double& v : lw)
        v = std::min(v, 0.0);
    const double norm = log_sum_exp(lw);
    for (double& v : lw)
        v -= norm;
    out.log_normalizer = norm;
    out.log_weights = std::move(lw);
    return out;
}

std::vector<std::size_t> LooResult::flagged(double threshold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pareto_k.size(); ++i)
        if (!pareto_k[i] || *pareto_k[i] > threshold)
            out.push_back(i);
    return out;
}

LooResult psis_loo(const LogLikMatrix& ll)
{
    if (ll.draws() < 100)
        throw InputError("psis-loo needs at least 100 draws");
    LooResult r;
    double lppd = 0.0;
    std::vector<double> neg(ll.draws());
    std::vector<double> terms(ll.draws());
    for (std::size_t i = 0; i < ll.observations(); ++i) {
        const auto col = ll.observation(i);
        lppd += log_mean_exp(col);
        for (std::size_t s = 0; s < col.size(); ++s)
            neg[s] = -col[s];
        const PsisWeights w = psis_smooth(neg);
        for (std::size_t s = 0; s < col.size(); ++s)
            terms[s] = w.log_weights[s] + col[s];
        r.pointwise_elpd.push_back(log_sum_exp(terms));
        r.pareto_k.push_back(w.pareto_k);
    }
    r.elpd = std::accumulate(r.pointwise_elpd.begin(), r.pointwise_elpd.end(), 0.0);
    r.se = pointwise_se(r.pointwise_elpd);
    r.p_eff = lppd - r.elpd;
    return r;
}

ElpdDifference elpd_difference(std::span<const double> pointwise_a, std::span<const double> pointwise_b)
{
    if (pointwise_a.size() != pointwise_b.size())
        throw InputError("pointwise elpd vectors differ in length");
    std::vector<double> d(pointwise_a.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = pointwise_a[i] - pointwise_b[i];
    return {std::accumulate(d.begin(), d.end(), 0.0), pointwise_se(d)};
}

ComparisonResult compare(const std::vector<LogLikMatrix>& models)
{
    if (models.empty())
        throw InputError("compare needs at least one model");
    for (const auto& m : models)
        if (m.observations() != models.front().observations())
            throw InputError("models '" + models.front().label() + "' and '" + m.label() +
                             "' have different observation counts");
    ComparisonResult result;
    for (const auto& m : models)
        result.models.push_back({m.label(), psis_loo(m), waic(m), 0, 0.0, 0.0});
    std::stable_sort(result.models.begin(), result.models.end(),
                     [](const ModelScore& a, const ModelScore& b) { return a.loo.elpd > b.loo.elpd; });
    const auto& best = result.models.front().loo.pointwise_elpd;
    for (std::size_t i = 0; i < result.models.size(); ++i) {
        auto& m = result.models[i];
        m.rank = static_cast<int>(i) + 1;
        const auto d = elpd_difference(m.loo.pointwise_elpd, best);
        m.elpd_diff = d.diff;
        m.diff_se = d.se;
    }
    return result;
}

} // namespace practsig
