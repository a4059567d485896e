#include "practsig/distributions.hpp"
#include "practsig/error.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace practsig;
using doctest::Approx;

namespace {

double mean_of(const std::vector<double>& xs)
{
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs)
{
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

std::vector<double> draws(const dist::Family& f, int n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(sample(f, rng));
    return out;
}

} // namespace

TEST_CASE("value types validate their range")
{
    CHECK_THROWS_AS(Rate(0.0), DomainError);
    CHECK_THROWS_AS(Rate(-1.0), DomainError);
    CHECK_THROWS_AS(Rate(std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(Rate(std::nan("")), DomainError);
    CHECK_THROWS_AS(Probability(-0.01), DomainError);
    CHECK_THROWS_AS(Probability(1.01), DomainError);
    CHECK(Probability(0.0).value() == 0.0);
    CHECK(Probability(1.0).value() == 1.0);
}

TEST_CASE("poisson_logpmf")
{
    CHECK(poisson_logpmf(0, Rate(1.0)) == Approx(-1.0).epsilon(1e-15));
    CHECK(poisson_logpmf(3, Rate(2.0)) == Approx(-1.7123179275482192).epsilon(1e-12));
    CHECK(poisson_logpmf(20, Rate(7.0)) == Approx(-10.417413479647223).epsilon(1e-12));
    CHECK(poisson_logpmf(1000, Rate(950.5)) == Approx(-5.64001655967968).epsilon(1e-10));
    CHECK(poisson_logpmf(-1, Rate(1.0)) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log_gamma against reference values")
{
    CHECK(log_gamma(0.5) == Approx(0.5723649429247).epsilon(1e-12));
    CHECK(log_gamma(1.0) == 0.0);
    CHECK(log_gamma(1e6) == Approx(12815504.569147611).epsilon(1e-13));
    // ln k! by summation for small k
    double acc = 0.0;
    for (int k = 1; k <= 30; ++k) {
        acc += std::log(static_cast<double>(k));
        CHECK(log_gamma(k + 1.0) == Approx(acc).epsilon(1e-12));
    }
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("zip_logpmf")
{
    CHECK(zip_logpmf(0, Rate(5.0), Probability(1.0)) == 0.0);
    CHECK(zip_logpmf(0, Rate(2.0), Probability(0.3)) == Approx(-0.9295413896993308).epsilon(1e-12));
    CHECK(zip_logpmf(2, Rate(2.0), Probability(0.3)) == Approx(-1.663527763378787).epsilon(1e-12));
    CHECK(zip_logpmf(3, Rate(2.0), Probability(1.0)) == -std::numeric_limits<double>::infinity());
    // k = 0 at a rate where exp(-lambda) underflows
    CHECK(zip_logpmf(0, Rate(800.0), Probability(0.25)) == Approx(std::log(0.25)).epsilon(1e-14));
    CHECK(std::isfinite(zip_logpmf(0, Rate(800.0), Probability(0.0))));
}

TEST_CASE("zip with p = 0 is exactly poisson")
{
    for (double lambda : {0.1, 1.0, 7.0, 50.0})
        for (int k = 0; k < 120; ++k)
            CHECK(zip_logpmf(k, Rate(lambda), Probability(0.0)) == poisson_logpmf(k, Rate(lambda)));
}

TEST_CASE("pmfs normalize")
{
    for (double lambda : {0.1, 1.0, 7.0, 50.0}) {
        const int K = static_cast<int>(std::ceil(lambda + 10.0 * std::sqrt(lambda) + 20.0));
        double total = 0.0;
        for (int k = 0; k <= K; ++k)
            total += std::exp(poisson_logpmf(k, Rate(lambda)));
        CHECK(total == Approx(1.0).epsilon(1e-9));
        for (double p : {0.0, 0.2, 0.5, 0.9}) {
            double z = 0.0;
            for (int k = 0; k <= K; ++k)
                z += std::exp(zip_logpmf(k, Rate(lambda), Probability(p)));
            CHECK(std::abs(z - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("normal_logpdf")
{
    CHECK(normal_logpdf(0, 0, 1) == Approx(-0.9189385332046727).epsilon(1e-14));
    CHECK(normal_logpdf(0, 0, 1.5) == Approx(-1.324403641312837).epsilon(1e-14));
    for (double mu : {-3.0, 0.0, 2.5})
        for (double sigma : {0.5, 1.0, 4.0})
            CHECK(normal_logpdf(mu + sigma, mu, sigma) - normal_logpdf(mu, mu, sigma) == Approx(-0.5).epsilon(1e-14));
    CHECK_THROWS_AS(normal_logpdf(0, 0, 0), DomainError);
    CHECK_THROWS_AS(normal_logpdf(0, 0, -1), DomainError);
}

TEST_CASE("half_cauchy_logpdf")
{
    CHECK(half_cauchy_logpdf(0, 1) == Approx(-0.4515827052894548).epsilon(1e-14));
    CHECK(half_cauchy_logpdf(1, 1) == Approx(-1.1447298858494002).epsilon(1e-14));
    CHECK(half_cauchy_logpdf(2.5, 1.7) == Approx(-2.133614839693343).epsilon(1e-14));
    for (double s : {0.1, 1.0, 3.0, 250.0})
        CHECK(half_cauchy_logpdf(0, s) == Approx(std::log(2.0 / (std::numbers::pi * s))).epsilon(1e-14));
    CHECK_THROWS_AS(half_cauchy_logpdf(-0.1, 1), DomainError);
    CHECK_THROWS_AS(half_cauchy_logpdf(1, 0), DomainError);
    // strictly decreasing
    double prev = half_cauchy_logpdf(0, 1);
    for (int i = 1; i <= 1000; ++i) {
        const double v = half_cauchy_logpdf(i * 0.01, 1);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("logit and inv_logit")
{
    CHECK(inv_logit(0) == 0.5);
    CHECK(inv_logit(-4.61) == Approx(0.009853755523231264).epsilon(1e-13));
    CHECK(std::abs(logit(inv_logit(2.5)) - 2.5) < 1e-12);
    // p space over the whole range; x space where 1 - p keeps its digits
    for (double x = -29.75; x < 30.0; x += 0.25) {
        const double p = inv_logit(x);
        CHECK(std::abs(inv_logit(logit(p)) - p) < 1e-12);
        if (x <= 5.0)
            CHECK(std::abs(logit(p) - x) < 1e-12);
    }
    CHECK(inv_logit(1000.0) == 1.0);
    CHECK(inv_logit(-1000.0) >= 0.0);
    double prev = inv_logit(-30.0);
    for (double x = -29.9; x <= 30.0; x += 0.1) {
        CHECK(inv_logit(x) > prev);
        prev = inv_logit(x);
    }
    CHECK_THROWS_AS(logit(0.0), DomainError);
    CHECK_THROWS_AS(logit(1.0), DomainError);
}

TEST_CASE("log_sum_exp")
{
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(log_sum_exp(ninf, ninf) == ninf);
    CHECK(log_sum_exp(ninf, 2.0) == 2.0);
    CHECK(log_sum_exp(1000.0, 1000.0) == Approx(1000.0 + std::log(2.0)));
    CHECK(log_sum_exp(std::log(0.2), std::log(0.3)) == Approx(std::log(0.5)).epsilon(1e-15));
}

TEST_CASE("sampling moments")
{
    const auto pois = draws(dist::Poisson{4.0}, 100000, 1);
    CHECK(mean_of(pois) >= 3.95);
    CHECK(mean_of(pois) <= 4.05);

    const auto norm = draws(dist::Normal{0.0, 1.5}, 100000, 2);
    CHECK(sd_of(norm) >= 1.48);
    CHECK(sd_of(norm) <= 1.52);

    for (double d : draws(dist::ZeroInflatedPoisson{5.0, 1.0}, 1000, 3))
        CHECK(d == 0.0);

    // ZIP mean within 3 standard errors of (1 - p) lambda
    for (auto [lambda, p] : {std::pair{5.0, 0.3}, std::pair{0.8, 0.6}, std::pair{20.0, 0.05}}) {
        const auto z = draws(dist::ZeroInflatedPoisson{lambda, p}, 100000, 4);
        const double se = sd_of(z) / std::sqrt(static_cast<double>(z.size()));
        CHECK(std::abs(mean_of(z) - (1 - p) * lambda) < 3 * se);
    }

    const auto hc = draws(dist::HalfCauchy{2.0}, 100000, 5);
    std::vector<double> sorted = hc;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted.front() >= 0.0);
    CHECK(sorted[sorted.size() / 2] == Approx(2.0).epsilon(0.03)); // median equals the scale

    const auto b = draws(dist::Bernoulli{0.3}, 100000, 6);
    CHECK(mean_of(b) == Approx(0.3).epsilon(0.02));
    const auto u = draws(dist::Uniform{-2.0, 2.0}, 100000, 7);
    CHECK(mean_of(u) == Approx(0.0).epsilon(0.02));
}

TEST_CASE("sampling is deterministic and validated")
{
    CHECK(draws(dist::Poisson{3.0}, 50, 9) == draws(dist::Poisson{3.0}, 50, 9));
    Rng rng(1);
    CHECK_THROWS_AS(sample(dist::Poisson{-1.0}, rng), DomainError);
    CHECK_THROWS_AS(sample(dist::ZeroInflatedPoisson{1.0, 1.5}, rng), DomainError);
    CHECK_THROWS_AS(sample(dist::Normal{0.0, 0.0}, rng), DomainError);
    CHECK_THROWS_AS(sample(dist::HalfCauchy{0.0}, rng), DomainError);
    CHECK_THROWS_AS(sample(dist::Bernoulli{-0.2}, rng), DomainError);
    CHECK_THROWS_AS(sample(dist::Uniform{1.0, 1.0}, rng), DomainError);
}
