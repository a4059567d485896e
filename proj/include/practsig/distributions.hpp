#pragma once

#include "practsig/rng.hpp"

#include <cstdint>
#include <variant>

namespace practsig {

/// Positive, finite Poisson rate (expected fault count per session).
class Rate {
public:
    explicit Rate(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Real number in [0, 1].
class Probability {
public:
    explicit Probability(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// ln Γ(x) for x > 0. Reentrant.
double log_gamma(double x);

double poisson_logpmf(std::int64_t k, Rate lambda);

/// Zero-inflated Poisson: a structural zero with probability p, otherwise
/// Poisson(lambda). Returns -inf (not an error) for k > 0 when p == 1.
double zip_logpmf(std::int64_t k, Rate lambda, Probability p);

double normal_logpdf(double x, double mu, double sigma);

/// Cauchy(0, scale) truncated to [0, inf).
double half_cauchy_logpdf(double x, double scale);

/// Overflow-safe logistic function.
double inv_logit(double x) noexcept;
double logit(double p);

/// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
double log_sum_exp(double a, double b) noexcept;

namespace dist {

struct Poisson {
    double lambda;
};
struct ZeroInflatedPoisson {
    double lambda;
    double p;
};
struct Normal {
    double mu;
    double sigma;
};
struct HalfCauchy {
    double scale;
};
struct Bernoulli {
    double p;
};
struct Uniform {
    double lo;
    double hi;
};

using Family = std::variant<Poisson, ZeroInflatedPoisson, Normal, HalfCauchy, Bernoulli, Uniform>;

} // namespace dist

/// One draw from `family`. Count families return integral values.
/// Throws DomainError on invalid parameters.
double sample(const dist::Family& family, Rng& rng);

std::int64_t sample_poisson(double lambda, Rng& rng);
std::int64_t sample_zip(double lambda, double p, Rng& rng);
double sample_normal(double mu, double sigma, Rng& rng);

} // namespace practsig
