#include "practsig/distributions.hpp"

#include "practsig/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <math.h>

namespace practsig {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void check_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(what) + ": probability must lie in [0, 1], got " + std::to_string(p));
}

void check_rate(double lambda, const char* what)
{
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw DomainError(std::string(what) + ": rate must be positive and finite, got " + std::to_string(lambda));
}

} // namespace

Rate::Rate(double value) : value_(value)
{
    check_rate(value, "Rate");
}

Probability::Probability(double value) : value_(value)
{
    check_probability(value, "Probability");
}

double log_gamma(double x)
{
    if (!(x > 0.0))
        throw DomainError("log_gamma: argument must be positive");
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double poisson_logpmf(std::int64_t k, Rate lambda)
{
    if (k < 0)
        return neg_inf;
    const double l = lambda.value();
    const double kd = static_cast<double>(k);
    const double kterm = k == 0 ? 0.0 : kd * std::log(l);
    return kterm - l - log_gamma(kd + 1.0);
}

double log_sum_exp(double a, double b) noexcept
{
    if (a == neg_inf)
        return b;
    if (b == neg_inf)
        return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

double zip_logpmf(std::int64_t k, Rate lambda, Probability p)
{
    const double pv = p.value();
    if (k < 0)
        return neg_inf;
    if (k == 0) {
        const double log_p = pv > 0.0 ? std::log(pv) : neg_inf;
        const double log_q = pv < 1.0 ? std::log1p(-pv) : neg_inf;
        return log_sum_exp(log_p, log_q - lambda.value());
    }
    if (pv == 1.0)
        return neg_inf;
    // p == 0 must reproduce poisson_logpmf bit for bit.
    if (pv == 0.0)
        return poisson_logpmf(k, lambda);
    return std::log1p(-pv) + poisson_logpmf(k, lambda);
}

double normal_logpdf(double x, double mu, double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DomainError("normal_logpdf: sigma must be positive and finite");
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const double z = (x - mu) / sigma;
    return -std::log(sigma) - half_log_two_pi - 0.5 * z * z;
}

double half_cauchy_logpdf(double x, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("half_cauchy_logpdf: scale must be positive and finite");
    if (!(x >= 0.0))
        throw DomainError("half_cauchy_logpdf: support is [0, inf)");
    const double u = x / scale;
    return std::log(2.0 / std::numbers::pi) - std::log(scale) - std::log1p(u * u);
}

double inv_logit(double x) noexcept
{
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("logit: argument must lie in (0, 1)");
    return std::log(p) - std::log1p(-p);
}

std::int64_t sample_poisson(double lambda, Rng& rng)
{
    check_rate(lambda, "sample_poisson");
    std::poisson_distribution<std::int64_t> d(lambda);
    return d(rng);
}

std::int64_t sample_zip(double lambda, double p, Rng& rng)
{
    check_rate(lambda, "sample_zip");
    check_probability(p, "sample_zip");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < p)
        return 0;
    return sample_poisson(lambda, rng);
}

double sample_normal(double mu, double sigma, Rng& rng)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu))
        throw DomainError("sample_normal: invalid parameters");
    std::normal_distribution<double> d(mu, sigma);
    return d(rng);
}

double sample(const dist::Family& family, Rng& rng)
{
    struct Visitor {
        Rng& rng;

        double operator()(const dist::Poisson& d) const
        {
            return static_cast<double>(sample_poisson(d.lambda, rng));
        }
        double operator()(const dist::ZeroInflatedPoisson& d) const
        {
            return static_cast<double>(sample_zip(d.lambda, d.p, rng));
        }
        double operator()(const dist::Normal& d) const { return sample_normal(d.mu, d.sigma, rng); }
        double operator()(const dist::HalfCauchy& d) const
        {
            if (!(d.scale > 0.0) || !std::isfinite(d.scale))
                throw DomainError("sample: half-Cauchy scale must be positive");
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return d.scale * std::tan(0.5 * std::numbers::pi * u(rng));
        }
        double operator()(const dist::Bernoulli& d) const
        {
            check_probability(d.p, "sample: Bernoulli");
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return u(rng) < d.p ? 1.0 : 0.0;
        }
        double operator()(const dist::Uniform& d) const
        {
            if (!(d.lo < d.hi) || !std::isfinite(d.lo) || !std::isfinite(d.hi))
                throw DomainError("sample: uniform bounds must be finite with lo < hi");
            std::uniform_real_distribution<double> u(d.lo, d.hi);
            return u(rng);
        }
    };
    return std::visit(Visitor{rng}, family);
}

} // namespace practsig
