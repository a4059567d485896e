#include "practsig/diagnostics.hpp"

#include "practsig/error.hpp"
#include "practsig/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace practsig::mcmc {

namespace {

std::vector<std::vector<double>> split_chains(const std::vector<std::vector<double>>& chains)
{
    std::vector<std::vector<double>> out;
    for (const auto& c : chains) {
        const std::size_t half = c.size() / 2;
        out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
        // Odd lengths drop the middle draw.
        out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
    }
    return out;
}

std::vector<std::vector<double>> per_chain(const Draws& draws, std::size_t param)
{
    std::vector<std::vector<double>> chains;
    for (int c = 0; c < draws.chains; ++c)
        chains.push_back(draws.chain_column(c, param));
    return chains;
}

bool equal_lengths(const std::vector<std::vector<double>>& chains)
{
    return std::all_of(chains.begin(), chains.end(),
                       [&](const auto& c) { return c.size() == chains.front().size(); });
}

/// Rank-normalized z-scores: average ranks over the pooled draws mapped
/// through the standard normal quantile of (r - 3/8) / (S + 1/4).
std::vector<std::vector<double>> rank_normalize(const std::vector<std::vector<double>>& chains)
{
    std::vector<std::pair<double, std::size_t>> pooled;
    for (std::size_t c = 0; c < chains.size(); ++c)
        for (std::size_t i = 0; i < chains[c].size(); ++i)
            pooled.emplace_back(chains[c][i], c * chains[c].size() + i);
    std::sort(pooled.begin(), pooled.end());
    const double total = static_cast<double>(pooled.size());
    std::vector<double> ranks(pooled.size());
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].first == pooled[i].first)
            ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k)
            ranks[pooled[k].second] = avg;
        i = j;
    }
    const boost::math::normal_distribution<double> std_normal;
    std::vector<std::vector<double>> out(chains.size());
    std::size_t idx = 0;
    for (std::size_t c = 0; c < chains.size(); ++c)
        for (std::size_t i = 0; i < chains[c].size(); ++i, ++idx)
            out[c].push_back(boost::math::quantile(std_normal, (ranks[idx] - 0.375) / (total + 0.25)));
    return out;
}

/// Multi-chain ESS with Geyer's initial positive and monotone sequences.
std::optional<double> ess_from_chains(const std::vector<std::vector<double>>& chains)
{
    const std::size_t m = chains.size();
    const std::size_t n = chains.front().size();
    if (n < 4)
        return std::nullopt;

    std::vector<double> means(m);
    std::vector<double> variances(m);
    for (std::size_t c = 0; c < m; ++c) {
        means[c] = stats::mean(chains[c]);
        variances[c] = stats::variance(chains[c]);
    }
    const double mean_var = stats::mean(variances);
    double var_plus = mean_var * static_cast<double>(n - 1) / static_cast<double>(n);
    if (m > 1)
        var_plus += stats::variance(means);
    if (!(mean_var > 0.0) || !(var_plus > 0.0))
        return std::nullopt;

    // Mean over chains of the biased autocovariance at `lag`.
    auto acov = [&](std::size_t lag) {
        double total = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i + lag < n; ++i)
                s += (chains[c][i] - means[c]) * (chains[c][i + lag] - means[c]);
            total += s / static_cast<double>(n);
        }
        return total / static_cast<double>(m);
    };
    auto rho = [&](std::size_t lag) { return 1.0 - (mean_var - acov(lag)) / var_plus; };

    std::vector<double> rho_hat(n + 1, 0.0);
    rho_hat[0] = 1.0;
    double even = 1.0;
    double odd = rho(1);
    rho_hat[1] = odd;
    std::size_t t = 0;
    while (t + 5 < n && even + odd > 0.0) {
        t += 2;
        even = rho(t);
        odd = rho(t + 1);
        if (even + odd >= 0.0) {
            rho_hat[t] = even;
            rho_hat[t + 1] = odd;
        }
    }
    const std::size_t max_t = t;
    if (even > 0.0)
        rho_hat[max_t] = even;

    for (std::size_t s = 2; s + 2 <= max_t; s += 2) {
        if (rho_hat[s] + rho_hat[s + 1] > rho_hat[s - 2] + rho_hat[s - 1]) {
            rho_hat[s] = 0.5 * (rho_hat[s - 2] + rho_hat[s - 1]);
            rho_hat[s + 1] = rho_hat[s];
        }
    }

    const double total = static_cast<double>(m * n);
    double tau = -1.0 + 2.0 * std::accumulate(rho_hat.begin(), rho_hat.begin() + static_cast<std::ptrdiff_t>(max_t), 0.0) +
                 rho_hat[max_t + 1];
    tau = std::max(tau, 1.0 / std::log10(total));
    return total / tau;
}

} // namespace

std::optional<double> split_rhat(const std::vector<std::vector<double>>& chains)
{
    if (chains.size() < 2 || !equal_lengths(chains) || chains.front().size() < 4)
        return std::nullopt;
    const auto split = split_chains(chains);
    const double n = static_cast<double>(split.front().size());
    std::vector<double> means;
    std::vector<double> variances;
    for (const auto& c : split) {
        means.push_back(stats::mean(c));
        variances.push_back(stats::variance(c));
    }
    const double w = stats::mean(variances);
    if (!(w > 0.0))
        return std::nullopt;
    const double b_over_n = stats::variance(means);
    const double var_plus = (n - 1.0) / n * w + b_over_n;
    return std::sqrt(var_plus / w);
}

std::optional<double> ess_bulk(const std::vector<std::vector<double>>& chains)
{
    if (chains.empty() || !equal_lengths(chains) || chains.front().size() < 8)
        return std::nullopt;
    const auto split = split_chains(chains);
    for (const auto& c : split)
        if (stats::variance(c) > 0.0)
            return ess_from_chains(rank_normalize(split));
    return std::nullopt;
}

std::optional<double> ess_basic(const std::vector<std::vector<double>>& chains)
{
    if (chains.empty() || !equal_lengths(chains) || chains.front().size() < 8)
        return std::nullopt;
    return ess_from_chains(split_chains(chains));
}

std::optional<double> split_rhat(const Draws& draws, std::size_t param)
{
    return split_rhat(per_chain(draws, param));
}

std::optional<double> ess_bulk(const Draws& draws, std::size_t param)
{
    return ess_bulk(per_chain(draws, param));
}

std::vector<ParameterDiagnostics> diagnose(const Draws& draws)
{
    std::vector<ParameterDiagnostics> out;
    for (std::size_t p = 0; p < draws.dimension(); ++p)
        out.push_back({draws.names[p], split_rhat(draws, p), ess_bulk(draws, p)});
    return out;
}

} // namespace practsig::mcmc
