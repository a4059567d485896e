#include "practsig/stats.hpp"

#include "practsig/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace practsig::stats {

double mean(std::span<const double> xs)
{
    if (xs.empty())
        throw DomainError("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs)
{
    if (xs.size() < 2)
        return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double sd(std::span<const double> xs)
{
    return std::sqrt(variance(xs));
}

double quantile_sorted(std::span<const double> sorted, double q)
{
    if (sorted.empty())
        throw DomainError("quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw DomainError("quantile level must lie in [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> xs, double q)
{
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, q);
}

double quantile_inverse_cdf_sorted(std::span<const double> sorted, double q)
{
    if (sorted.empty())
        throw DomainError("quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw DomainError("quantile level must lie in [0, 1]");
    const double n = static_cast<double>(sorted.size());
    const double pos = std::ceil(n * q - 1e-12);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 1.0, n)) - 1;
    return sorted[idx];
}

EqualTailed equal_tailed(std::span<const double> xs, double level)
{
    if (!(level > 0.0 && level <= 1.0))
        throw DomainError("interval level must lie in (0, 1]");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const double tail = 0.5 * (1.0 - level);
    return {quantile_sorted(s, tail), quantile_sorted(s, 1.0 - tail)};
}

} // namespace practsig::stats
