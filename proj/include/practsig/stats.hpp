#pragma once

#include <span>
#include <vector>

namespace practsig::stats {

double mean(std::span<const double> xs);

/// Sample (n - 1) variance; 0 for fewer than two values.
double variance(std::span<const double> xs);
double sd(std::span<const double> xs);

/// Type-7 quantile (linear interpolation between order statistics) of
/// already sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

/// Type-7 quantile; copies and sorts.
double quantile(std::span<const double> xs, double q);

/// Type-1 quantile (inverse empirical CDF) of sorted data: always returns
/// one of the observed values.
double quantile_inverse_cdf_sorted(std::span<const double> sorted, double q);

struct EqualTailed {
    double lo;
    double hi;
};

/// Equal-tailed interval at `level` using type-7 quantiles.
EqualTailed equal_tailed(std::span<const double> xs, double level);

} // namespace practsig::stats
