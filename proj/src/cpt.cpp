#include "practsig/cpt.hpp"

#include "practsig/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace practsig::cpt {

namespace {

constexpr double min_gamma = 0.28;

double transformed(double relative, const WeightingParams& params)
{
    if (!params.power_value)
        return relative;
    if (relative >= 0.0)
        return std::pow(relative, params.value_exponent);
    return -params.loss_aversion * std::pow(-relative, params.value_exponent);
}

} // namespace

void CostProfile::validate() const
{
    if (!(session_hours > 0.0))
        throw ConfigError("session hours must be positive");
    for (double c : {savings_per_fault, hourly_low, hourly_high, hourly_mixed})
        if (!(c >= 0.0) || !std::isfinite(c))
            throw ConfigError("costs and savings must be nonnegative and finite");
}

double hourly_cost(const CostProfile& profile, CostSelector selector)
{
    switch (selector) {
    case CostSelector::low:
        return profile.hourly_low;
    case CostSelector::high:
        return profile.hourly_high;
    case CostSelector::mixed:
        return profile.hourly_mixed;
    }
    return profile.hourly_mixed;
}

std::string to_string(CostSelector selector)
{
    switch (selector) {
    case CostSelector::low:
        return "low";
    case CostSelector::high:
        return "high";
    case CostSelector::mixed:
        return "mixed";
    }
    return "mixed";
}

CostSelector parse_cost_selector(const std::string& text)
{
    if (text == "low")
        return CostSelector::low;
    if (text == "high")
        return CostSelector::high;
    if (text == "mixed")
        return CostSelector::mixed;
    throw ConfigError("unknown cost selector '" + text + "' (expected low, high, or mixed)");
}

std::string to_string(WeightingMode mode)
{
    return mode == WeightingMode::cumulative ? "cumulative" : "pointwise";
}

WeightingMode parse_weighting_mode(const std::string& text)
{
    if (text == "cumulative")
        return WeightingMode::cumulative;
    if (text == "pointwise")
        return WeightingMode::pointwise;
    throw ConfigError("unknown weighting mode '" + text + "' (expected cumulative or pointwise)");
}

void WeightingParams::validate() const
{
    for (double g : {gamma_gain, gamma_loss})
        if (!(g > min_gamma && g <= 1.0))
            throw DomainError("weighting gamma must lie in (0.28, 1]");
    if (power_value && (!(value_exponent > 0.0) || !(loss_aversion > 0.0)))
        throw DomainError("value exponent and loss aversion must be positive");
}

void Prospect::validate() const
{
    if (outcomes.empty())
        throw InputError("prospect has no outcomes");
    double total = 0.0;
    for (const auto& o : outcomes) {
        if (!std::isfinite(o.value))
            throw InputError("prospect value is not finite");
        if (!(o.probability >= 0.0))
            throw InputError("prospect probability is negative");
        total += o.probability;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InputError("prospect probabilities sum to " + std::to_string(total) + ", not 1");
    if (!std::isfinite(reference))
        throw InputError("prospect reference point is not finite");
}

double Prospect::expectation() const
{
    double e = 0.0;
    for (const auto& o : outcomes)
        e += o.probability * (o.value - reference);
    return e;
}

double tk_weight(double p, double gamma)
{
    if (!(gamma > min_gamma))
        throw DomainError("tk_weight: gamma must exceed 0.28 for a monotone weighting function");
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("tk_weight: probability must lie in [0, 1]");
    if (p == 0.0 || p == 1.0)
        return p;
    const double a = std::pow(p, gamma);
    const double b = std::pow(1.0 - p, gamma);
    return a / std::pow(a + b, 1.0 / gamma);
}

double value(std::int64_t faults, double savings_per_fault, double hourly_cost, double hours)
{
    return savings_per_fault * static_cast<double>(faults) - hourly_cost * hours;
}

std::vector<double> decision_weights(const Prospect& prospect, const WeightingParams& params)
{
    prospect.validate();
    params.validate();
    const auto& xs = prospect.outcomes;
    const double ref = prospect.reference;
    std::vector<double> weights(xs.size(), 0.0);

    if (params.mode == WeightingMode::pointwise) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double g = xs[i].value >= ref ? params.gamma_gain : params.gamma_loss;
            weights[i] = tk_weight(std::min(1.0, xs[i].probability), g);
        }
        return weights;
    }

    // Group tied values; each group is ranked once and its weight shared in
    // proportion to probability.
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a].value < xs[b].value; });
    struct Group {
        double value;
        double probability;
        std::size_t first;
        std::size_t last; ///< exclusive, into `order`
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        double p = 0.0;
        while (j < order.size() && xs[order[j]].value == xs[order[i]].value)
            p += xs[order[j++]].probability;
        groups.push_back({xs[order[i]].value, p, i, j});
        i = j;
    }
    std::vector<double> group_weight(groups.size(), 0.0);

    double cum = 0.0;
    for (std::size_t g = 0; g < groups.size() && groups[g].value < ref; ++g) {
        const double next = std::min(1.0, cum + groups[g].probability);
        group_weight[g] = tk_weight(next, params.gamma_loss) - tk_weight(cum, params.gamma_loss);
        cum = next;
    }
    cum = 0.0;
    for (std::size_t g = groups.size(); g-- > 0 && groups[g].value >= ref;) {
        const double next = std::min(1.0, cum + groups[g].probability);
        group_weight[g] = tk_weight(next, params.gamma_gain) - tk_weight(cum, params.gamma_gain);
        cum = next;
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::size_t members = groups[g].last - groups[g].first;
        for (std::size_t k = groups[g].first; k < groups[g].last; ++k) {
            const std::size_t i = order[k];
            weights[i] = groups[g].probability > 0.0
                             ? group_weight[g] * xs[i].probability / groups[g].probability
                             : group_weight[g] / static_cast<double>(members);
        }
    }
    return weights;
}

double expected_utility(const Prospect& prospect, const WeightingParams& params)
{
    const auto w = decision_weights(prospect, params);
    double u = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        u += w[i] * transformed(prospect.outcomes[i].value - prospect.reference, params);
    return u;
}

std::array<TailEntry, 3> tail_breakdown(const Prospect& prospect, const std::array<double, 3>& split)
{
    prospect.validate();
    for (double s : split)
        if (!(s >= 0.0))
            throw DomainError("tail split entries must be nonnegative");
    if (std::abs(split[0] + split[1] + split[2] - 1.0) > 1e-9)
        throw DomainError("tail split must sum to 1");

    std::vector<Outcome> sorted = prospect.outcomes;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Outcome& a, const Outcome& b) { return a.value < b.value; });
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0,
                                         [](double acc, const Outcome& o) { return acc + o.probability; });
    const std::array<double, 4> bounds{0.0, split[0] * total, (split[0] + split[1]) * total, total};

    std::array<TailEntry, 3> out{};
    std::array<double, 3> mass{};
    double lo = 0.0;
    for (const auto& o : sorted) {
        const double hi = lo + o.probability;
        for (int band = 0; band < 3; ++band) {
            const double overlap = std::min(hi, bounds[band + 1]) - std::max(lo, bounds[band]);
            if (overlap > 0.0) {
                mass[band] += overlap;
                out[band].value += overlap * o.value;
            }
        }
        lo = hi;
    }
    for (int band = 0; band < 3; ++band) {
        out[band].probability = split[band];
        if (mass[band] > 0.0) {
            out[band].value /= mass[band];
        } else {
            // Empty band (zero width): report the boundary outcome.
            out[band].value = band == 0 ? sorted.front().value : (band == 2 ? sorted.back().value : prospect.expectation() + prospect.reference);
        }
    }
    return out;
}

} // namespace practsig::cpt
