#include "practsig/error.hpp"
#include "practsig/scenarios.hpp"
#include "practsig/synthetic.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace practsig;
using namespace practsig::scenarios;
using doctest::Approx;

namespace {

Posterior fixed_rate(double lambda, double alpha_p, int draws = 1000)
{
    ModelSpec spec;
    ParameterVector p;
    p.alpha = std::log(lambda);
    p.alpha_p = alpha_p;
    p.sigma_s = 1e-300;
    return testing::degenerate_posterior(p, spec, 2, 4, draws);
}

/// Population means with a small spread so the sweep has real uncertainty.
const Posterior& reference_posterior()
{
    static const Posterior post = [] {
        ModelSpec spec;
        const auto data = synthetic::generate(synthetic::paper_means(), synthetic::DesignSpec::paper(), spec, 71);
        mcmc::SamplerConfig cfg;
        cfg.chains = 2;
        cfg.warmup_iterations = 500;
        cfg.retained_draws_per_chain = 1000;
        cfg.seed = 72;
        return fit(data, spec, cfg);
    }();
    return post;
}

EvaluationOptions seeded(std::uint64_t seed)
{
    EvaluationOptions o;
    o.seed = seed;
    return o;
}

} // namespace

TEST_CASE("prospect from a fixed Poisson rate")
{
    const auto post = fixed_rate(3.0, -1e6);
    const cpt::CostProfile profile;
    const auto options = seeded(1);
    const auto prospect = build_prospect(post, {0, 0}, cpt::CostSelector::low, profile, options);
    const auto counts = simulate_counts(post, {0, 0}, options);
    REQUIRE(counts.size() == 4000);

    double total = 0.0;
    for (const auto& o : prospect.outcomes)
        total += o.probability;
    CHECK(total == Approx(1.0).epsilon(1e-12));

    // 150 * 3 - 100 * 3, Monte Carlo sd about 260 / sqrt(4000)
    CHECK(std::abs(prospect.expectation() - 150.0) < 4 * 150.0 * std::sqrt(3.0 / 4000.0));

    // support is exactly the distinct simulated counts
    const std::set<std::int64_t> distinct(counts.begin(), counts.end());
    REQUIRE(prospect.outcomes.size() == distinct.size());
    std::size_t i = 0;
    for (auto c : distinct)
        CHECK(prospect.outcomes[i++].value == cpt::value(c, 150, 100, 3));
}

TEST_CASE("a certain zero arm gives a single outcome")
{
    const auto post = fixed_rate(3.0, 1e6);
    const auto prospect = build_prospect(post, {1, 1}, cpt::CostSelector::high, {}, seeded(2));
    REQUIRE(prospect.outcomes.size() == 1);
    CHECK(prospect.outcomes[0].value == -600.0);
    CHECK(prospect.outcomes[0].probability == 1.0);
}

TEST_CASE("prospect construction errors")
{
    CHECK_THROWS_AS(prospect_from_counts({}, 150, 100, 3), InputError);
    Scenario one{"one", {{"a", {0, 0}, cpt::CostSelector::low}}};
    CHECK_THROWS_AS(evaluate_scenario(fixed_rate(1, 0, 10), one, {}, {}, {}), ConfigError);
    CHECK_THROWS_AS(preset("budget"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_parameter("k"), ConfigError);
    CHECK(parse_sweep_parameter("C_high") == SweepParameter::hourly_high);
    CHECK(to_string(SweepParameter::hours) == "h");
}

TEST_CASE("presets")
{
    CHECK(preset_names() == std::vector<std::string>{"approach", "experience", "exploratory"});
    const auto a = preset("approach");
    REQUIRE(a.options.size() == 2);
    CHECK(a.options[0].cost == cpt::CostSelector::mixed);
    CHECK(a.options[1].setting.testcase_weight == 1.0);
    const auto e = preset("experience");
    CHECK(e.options[0].cost == cpt::CostSelector::low);
    CHECK(e.options[1].cost == cpt::CostSelector::high);
    CHECK(e.options[1].setting.high_experience_weight == 1.0);
    const auto x = preset("exploratory");
    CHECK(x.options[0].setting == PredictorSetting{0, 0});
    CHECK(x.options[1].setting == PredictorSetting{0, 1});
}

TEST_CASE("identical options give identical utilities")
{
    const Scenario twins{"twins",
                         {{"a", {0.5, 0.5}, cpt::CostSelector::mixed}, {"b", {0.5, 0.5}, cpt::CostSelector::mixed}}};
    const auto r = evaluate_scenario(reference_posterior(), twins, {}, {}, seeded(3));
    CHECK(std::abs(r.options[0].utility - r.options[1].utility) < 1e-9);
    CHECK(r.options[0].label == "a");
    CHECK(r.options[1].label == "b");
}

TEST_CASE("scenario orderings at reference costs")
{
    const auto& post = reference_posterior();
    const auto approach = evaluate_scenario(post, preset("approach"), {}, {}, seeded(4));
    CHECK(approach.options[0].utility > approach.options[1].utility);
    CHECK(approach.best == 0);
    CHECK(approach.options[0].mc_se > 0.0);

    const auto expl = evaluate_scenario(post, preset("exploratory"), {}, {}, seeded(5));
    CHECK(expl.options[0].utility > 0.0);
    CHECK(expl.options[1].utility > 0.0);
}

TEST_CASE("reports are deterministic")
{
    const auto& post = reference_posterior();
    const auto a = evaluate_scenario(post, preset("experience"), {}, {}, seeded(6));
    const auto b = evaluate_scenario(post, preset("experience"), {}, {}, seeded(6));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.options[i].utility == b.options[i].utility);
        CHECK(a.options[i].mc_se == b.options[i].mc_se);
        CHECK(a.options[i].tails[1].value == b.options[i].tails[1].value);
    }
    CHECK(a.seed == 6);
}

TEST_CASE("identity weighting gives the plain expectation")
{
    const auto& post = reference_posterior();
    cpt::WeightingParams w;
    w.gamma_gain = 1.0;
    w.gamma_loss = 1.0;
    const auto scenario = preset("approach");
    const auto r = evaluate_scenario(post, scenario, {}, w, seeded(7));
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& option = scenario.options[i];
        const auto p = build_prospect(post, option.setting, option.cost, {}, seeded(7));
        CHECK(std::abs(r.options[i].utility - p.expectation()) < 1e-9);
        CHECK(std::abs(r.options[i].utility - r.options[i].expected_value) < 1e-9);
    }
}

TEST_CASE("sensitivity sweeps")
{
    const auto& post = reference_posterior();
    const auto experience = preset("experience");

    const auto zero = sensitivity_sweep(post, experience, {}, {}, SweepParameter::savings, {0.0}, seeded(8));
    CHECK(zero.rows[0].utilities[0] == Approx(-300.0).epsilon(1e-9));
    CHECK(zero.rows[0].utilities[1] == Approx(-600.0).epsilon(1e-9));
    CHECK(zero.rows[0].best == 0);

    std::vector<double> s_values;
    for (int s = 0; s <= 2000; s += 100)
        s_values.push_back(s);
    const auto sweep = sensitivity_sweep(post, experience, {}, {}, SweepParameter::savings, s_values, seeded(8));
    REQUIRE(sweep.rows.size() == s_values.size());
    CHECK(sweep.labels == std::vector<std::string>{"low", "high"});
    for (std::size_t i = 1; i < sweep.rows.size(); ++i)
        for (std::size_t o = 0; o < 2; ++o)
            CHECK(sweep.rows[i].utilities[o] >= sweep.rows[i - 1].utilities[o]);

    // with identity weighting the utility is exactly affine in S
    cpt::WeightingParams id;
    id.gamma_gain = 1.0;
    id.gamma_loss = 1.0;
    const auto lin = sensitivity_sweep(post, experience, {}, id, SweepParameter::savings, s_values, seeded(8));
    for (std::size_t o = 0; o < 2; ++o) {
        const double slope = (lin.rows[1].utilities[o] - lin.rows[0].utilities[o]) / 100.0;
        CHECK(slope > 0.0);
        for (std::size_t i = 2; i < lin.rows.size(); ++i)
            CHECK(lin.rows[i].utilities[o] ==
                  Approx(lin.rows[0].utilities[o] + slope * s_values[i]).epsilon(1e-9).scale(1000));
    }

    const auto costs =
        sensitivity_sweep(post, experience, {}, {}, SweepParameter::hourly_high, {100, 150, 200, 300}, seeded(8));
    for (std::size_t i = 1; i < costs.rows.size(); ++i) {
        CHECK(costs.rows[i].utilities[1] <= costs.rows[i - 1].utilities[1]);
        CHECK(costs.rows[i].utilities[0] == costs.rows[0].utilities[0]);
    }

    CHECK_THROWS_AS(sensitivity_sweep(post, experience, {}, {}, SweepParameter::savings, {}, seeded(8)), ConfigError);
}
