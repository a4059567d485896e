#include "practsig/distributions.hpp"
#include "practsig/error.hpp"
#include "practsig/model.hpp"
#include "practsig/posterior.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace practsig;
using doctest::Approx;

namespace {

ModelSpec m1()
{
    ModelSpec s;
    s.kind = ModelKind::M1;
    return s;
}

ModelSpec m2()
{
    return ModelSpec{};
}

Dataset small_dataset()
{
    return Dataset({{0, 0, 0, 3}, {1, 1, 0, 0}, {2, 0, 1, 7}, {3, 1, 1, 2}, {0, 1, 0, 0}, {1, 0, 1, 5}}, 4);
}

ParameterVector random_params(std::mt19937_64& rng, int n_subjects)
{
    std::normal_distribution<double> n(0.0, 1.0);
    ParameterVector p;
    p.alpha = n(rng);
    p.beta_a = n(rng);
    p.beta_e = n(rng);
    p.alpha_p = n(rng) - 1.0;
    p.beta_p = n(rng);
    p.sigma_s = std::exp(0.5 * n(rng));
    for (int s = 0; s < n_subjects; ++s)
        p.z_subjects.push_back(n(rng));
    return p;
}

} // namespace

TEST_CASE("dataset validation")
{
    CHECK_THROWS_AS(Dataset({}, 0), InputError);
    CHECK_THROWS_AS(Dataset({{0, 2, 0, 1}}, 1), InputError);
    CHECK_THROWS_AS(Dataset({{0, 0, -1, 1}}, 1), InputError);
    CHECK_THROWS_AS(Dataset({{0, 0, 0, -3}}, 1), InputError);
    CHECK_THROWS_AS(Dataset({{1, 0, 0, 3}}, 1), InputError);          // subject out of range
    CHECK_THROWS_AS(Dataset({{0, 0, 0, 3}, {2, 0, 0, 1}}, 3), InputError); // subject 1 unobserved
    const Dataset d = Dataset::from_observations({{1, 0, 0, 1}, {0, 1, 1, 2}, {1, 1, 0, 0}});
    CHECK(d.n_subjects() == 2);
    CHECK(d.subject_rows(1).size() == 2);
    CHECK(d.subject_rows(1)[1] == 2);
}

TEST_CASE("dataset fingerprint tracks content and order")
{
    const Dataset a = small_dataset();
    const Dataset b = small_dataset();
    CHECK(a.fingerprint() == b.fingerprint());
    auto obs = a.observations();
    obs[2].faults += 1;
    CHECK(Dataset(obs, 4).fingerprint() != a.fingerprint());
}

TEST_CASE("parameter layout")
{
    CHECK(parameter_dimension(m1(), 35) == 3);
    CHECK(parameter_dimension(m2(), 35) == 6 + 35);
    ModelSpec free_mu = m2();
    free_mu.estimate_subject_mean = true;
    CHECK(parameter_dimension(free_mu, 35) == 7 + 35);
    const auto names = parameter_names(m2(), 3);
    CHECK(names == std::vector<std::string>{"alpha", "beta_a", "beta_e", "alpha_p", "beta_p", "sigma_s", "z_0", "z_1",
                                            "z_2"});
    std::mt19937_64 rng(5);
    const ParameterVector p = random_params(rng, 3);
    const auto back = unpack(pack(p, m2()), m2(), 3);
    CHECK(back.alpha == p.alpha);
    CHECK(back.sigma_s == p.sigma_s);
    CHECK(back.z_subjects == p.z_subjects);
    double jac = 0.0;
    const auto u = from_unconstrained(to_unconstrained(p, m2()), m2(), 3, &jac);
    CHECK(u.sigma_s == Approx(p.sigma_s).epsilon(1e-14));
    CHECK(jac == Approx(std::log(p.sigma_s)).epsilon(1e-14));
}

TEST_CASE("linear predictors")
{
    ParameterVector p;
    p.alpha = std::log(2.0);
    const auto lp = linear_predictors(p, {0, 1, 1, 0}, m1());
    CHECK(lp.lambda.value() == Approx(2.0).epsilon(1e-15));
    CHECK(lp.p.value() == 0.0);

    ParameterVector q;
    q.alpha = 1.95;
    q.beta_a = -1.47;
    q.beta_e = 0.33;
    q.alpha_p = -4.61;
    q.beta_p = 3.39;
    q.sigma_s = 0.29;
    q.z_subjects = {0.0};
    const auto lq = linear_predictors(q, {0, 1, 1, 0}, m2());
    CHECK(lq.lambda.value() == Approx(2.2479079866764717).epsilon(1e-12));
    CHECK(lq.p.value() == Approx(0.22793645057321624).epsilon(1e-12));

    q.z_subjects = {1.5};
    const auto shifted = linear_predictors(q, {0, 1, 1, 0}, m2());
    CHECK(std::log(shifted.lambda.value()) == Approx(0.81 + 0.29 * 1.5).epsilon(1e-12));

    ModelSpec log_link = m2();
    log_link.zi_link = ZeroInflationLink::log;
    q.alpha_p = -2.0;
    q.beta_p = 0.5;
    CHECK(linear_predictors(q, {0, 1, 0, 0}, log_link).p.value() == Approx(std::exp(-1.5)).epsilon(1e-14));
    q.beta_p = 2.5; // p = exp(0.5) > 1
    CHECK_THROWS_AS(linear_predictors(q, {0, 1, 0, 0}, log_link), DomainError);
}

TEST_CASE("log likelihood examples")
{
    ParameterVector p;
    p.alpha = std::log(2.0);
    const Dataset one({{0, 0, 0, 3}}, 1);
    CHECK(log_likelihood(p, one, m1()).total == Approx(-1.7123179275482192).epsilon(1e-12));

    // log link: p = exp(-5 + 5 * approach) is 1 on the test-case arm
    ModelSpec log_link = m2();
    log_link.zi_link = ZeroInflationLink::log;
    ParameterVector q;
    q.alpha_p = -5.0;
    q.beta_p = 5.0;
    q.z_subjects.assign(4, 0.0);
    const auto ll = log_likelihood(q, small_dataset(), log_link);
    CHECK(ll.per_observation[1] == 0.0);
    CHECK(ll.per_observation[4] == 0.0);
    // a positive count on a p = 1 arm is impossible
    const Dataset bad({{0, 1, 0, 2}}, 1);
    q.z_subjects = {0.0};
    CHECK(log_likelihood(q, bad, log_link).total == -std::numeric_limits<double>::infinity());
    // log link with eta_p > 0: -inf, not an exception
    q.beta_p = 6.0;
    CHECK(log_likelihood(q, bad, log_link).total == -std::numeric_limits<double>::infinity());
}

TEST_CASE("total equals the sum of per-observation terms")
{
    std::mt19937_64 rng(11);
    const Dataset d = small_dataset();
    for (int i = 0; i < 100; ++i) {
        const auto p = random_params(rng, 4);
        for (const auto& spec : {m1(), m2()}) {
            const auto ll = log_likelihood(p, d, spec);
            double s = 0.0;
            for (double t : ll.per_observation)
                s += t;
            CHECK(std::abs(ll.total - s) < 1e-12);
        }
    }
}

TEST_CASE("log prior examples")
{
    CHECK(log_prior(ParameterVector{}, m1()) == Approx(-3.9732109239385114).epsilon(1e-13));
    CHECK(log_prior(ParameterVector{}, m2()) == Approx(6 * -1.324403641312837 + -1.1447298858494002).epsilon(1e-13));
    ParameterVector p;
    p.sigma_s = -0.1;
    CHECK(log_prior(p, m2()) == -std::numeric_limits<double>::infinity());
    p.sigma_s = 0.0;
    CHECK(log_prior(p, m2()) == -std::numeric_limits<double>::infinity());
    CHECK(std::isfinite(log_prior(p, m1()))); // sigma_s unused by M1
}

TEST_CASE("log posterior is prior plus likelihood")
{
    std::mt19937_64 rng(12);
    const Dataset d = small_dataset();
    for (int i = 0; i < 100; ++i) {
        const auto p = random_params(rng, 4);
        for (const auto& spec : {m1(), m2()})
            CHECK(std::abs(log_posterior(p, d, spec) - (log_prior(p, spec) + log_likelihood(p, d, spec).total)) <
                  1e-12);
    }
    ParameterVector bad;
    bad.sigma_s = -1.0;
    bad.z_subjects.assign(4, 0.0);
    CHECK(log_posterior(bad, d, m2()) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("M1 ignores the M2 fields")
{
    std::mt19937_64 rng(13);
    const Dataset d = small_dataset();
    auto p = random_params(rng, 4);
    const double base = log_posterior(p, d, m1());
    p.alpha_p = 9.0;
    p.beta_p = -9.0;
    p.sigma_s = 123.0;
    p.mu_s = 4.0;
    p.z_subjects = {};
    CHECK(log_posterior(p, d, m1()) == base);
}

TEST_CASE("likelihood responds monotonically along the intercept")
{
    // intercept-only slice, observed mean 4
    const Dataset d({{0, 0, 0, 2}, {1, 0, 0, 6}, {2, 0, 0, 4}, {3, 0, 0, 4}}, 4);
    ParameterVector p;
    double prev = -std::numeric_limits<double>::infinity();
    for (double a = std::log(0.5); a <= std::log(4.0); a += 0.01) {
        p.alpha = a;
        const double v = log_likelihood(p, d, m1()).total;
        CHECK(v >= prev);
        prev = v;
    }
    for (double a = std::log(4.0) + 0.01; a <= std::log(20.0); a += 0.01) {
        p.alpha = a;
        const double v = log_likelihood(p, d, m1()).total;
        CHECK(v <= prev);
        prev = v;
    }
    // with the prior held fixed the posterior slice stays concave
    double a0 = -1.0;
    for (int i = 0; i < 300; ++i, a0 += 0.01) {
        auto at = [&](double a) {
            p.alpha = a;
            return log_posterior(p, d, m1());
        };
        CHECK(at(a0 + 0.01) - 2 * at(a0) + at(a0 - 0.01) < 0.0);
    }
}

TEST_CASE("non-centered and centered forms agree")
{
    std::mt19937_64 rng(14);
    std::normal_distribution<double> n(0.0, 1.0);
    ModelSpec spec = m2();
    spec.estimate_subject_mean = true;
    for (int i = 0; i < 20; ++i) {
        auto p = random_params(rng, 5);
        p.mu_s = n(rng);
        double centered = normal_logpdf(p.alpha, 0, 1.5) + normal_logpdf(p.beta_a, 0, 1.5) +
                          normal_logpdf(p.beta_e, 0, 1.5) + normal_logpdf(p.alpha_p, 0, 1.5) +
                          normal_logpdf(p.beta_p, 0, 1.5) + normal_logpdf(p.mu_s, 0, 1.5) +
                          half_cauchy_logpdf(p.sigma_s, 1.0);
        for (int s = 0; s < 5; ++s) {
            const double a = p.subject_intercept(s);
            CHECK(a == p.mu_s + p.sigma_s * p.z_subjects[static_cast<std::size_t>(s)]);
            centered += normal_logpdf(a, p.mu_s, p.sigma_s);
        }
        // density of z = density of the intercepts times |da/dz| = sigma^n
        CHECK(log_prior(p, spec) == Approx(centered + 5 * std::log(p.sigma_s)).epsilon(1e-12));
    }
}

TEST_CASE("M2 approaches M1 as p goes to zero and sigma to zero")
{
    std::mt19937_64 rng(15);
    const Dataset d = small_dataset();
    for (int i = 0; i < 20; ++i) {
        auto p = random_params(rng, 4);
        p.alpha_p = -40.0;
        p.beta_p = 0.0;
        p.sigma_s = 1e-12;
        std::fill(p.z_subjects.begin(), p.z_subjects.end(), 0.0);
        const auto a = log_likelihood(p, d, m1()).per_observation;
        const auto b = log_likelihood(p, d, m2()).per_observation;
        for (std::size_t k = 0; k < a.size(); ++k)
            CHECK(std::abs(a[k] - b[k]) < 1e-8);
    }
}

TEST_CASE("permuting observations leaves the total bit-identical")
{
    std::mt19937_64 rng(16);
    const Dataset d = synthetic::generate(synthetic::paper_means(), synthetic::DesignSpec::paper(2), m2(), 3);
    auto obs = d.observations();
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(obs.begin(), obs.end(), rng);
        const Dataset shuffled(obs, d.n_subjects());
        const auto p = random_params(rng, d.n_subjects());
        CHECK(log_likelihood(p, shuffled, m2()).total == log_likelihood(p, d, m2()).total);
        CHECK(log_posterior(p, shuffled, m1()) == log_posterior(p, d, m1()));
    }
}

TEST_CASE("permuting observations leaves a fit bit-identical")
{
    std::mt19937_64 rng(17);
    const Dataset d = synthetic::generate(synthetic::paper_means(), synthetic::DesignSpec::paper(1), m2(), 4);
    auto obs = d.observations();
    std::shuffle(obs.begin(), obs.end(), rng);
    const Dataset shuffled(obs, d.n_subjects());
    mcmc::SamplerConfig cfg;
    cfg.chains = 2;
    cfg.warmup_iterations = 200;
    cfg.retained_draws_per_chain = 100;
    cfg.seed = 8;
    CHECK(fit(d, m2(), cfg).draws.values == fit(shuffled, m2(), cfg).draws.values);
}

TEST_CASE("model enums round-trip through text")
{
    CHECK(parse_model_kind(to_string(ModelKind::M1)) == ModelKind::M1);
    CHECK(parse_model_kind("M2") == ModelKind::M2);
    CHECK(parse_zi_link(to_string(ZeroInflationLink::log)) == ZeroInflationLink::log);
    CHECK_THROWS_AS(parse_model_kind("m3"), ConfigError);
    CHECK_THROWS_AS(parse_zi_link("probit"), ConfigError);
    ModelSpec bad;
    bad.prior_sd = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
