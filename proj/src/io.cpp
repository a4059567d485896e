#include "practsig/io.hpp"

#include "practsig/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace practsig::io {

namespace {

using csv::format_double;

int parse_indicator(const std::string& text, const char* zero_word, const char* one_word, const std::string& context)
{
    if (text == "0" || text == zero_word)
        return 0;
    if (text == "1" || text == one_word)
        return 1;
    throw InputError(context + ": '" + text + "' is not one of 0, 1, " + zero_word + ", " + one_word);
}

std::string hex(std::uint64_t v)
{
    std::ostringstream s;
    s << std::hex << v;
    return s.str();
}

std::string optional_number(const std::optional<double>& v)
{
    return v ? format_double(*v) : "NA";
}

} // namespace

Dataset parse_dataset(const csv::Table& table)
{
    const std::size_t c_subject = table.column("subject");
    const std::size_t c_approach = table.column("approach");
    const std::size_t c_experience = table.column("experience");
    const std::size_t c_faults = table.column("faults");
    if (table.rows.empty())
        throw InputError("data file has no rows");
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const std::string ctx = "data row " + std::to_string(i + 1);
        Observation o;
        const long long subject = csv::parse_integer(r[c_subject], ctx + " subject");
        if (subject < 0 || subject > 1'000'000)
            throw InputError(ctx + ": subject id must be a nonnegative integer");
        o.subject = static_cast<int>(subject);
        o.approach = parse_indicator(r[c_approach], "exploratory", "testcase", ctx + " approach");
        o.experience = parse_indicator(r[c_experience], "low", "high", ctx + " experience");
        o.faults = csv::parse_integer(r[c_faults], ctx + " faults");
        if (o.faults < 0)
            throw InputError(ctx + ": negative fault count " + std::to_string(o.faults));
        obs.push_back(o);
    }
    return Dataset::from_observations(std::move(obs));
}

Dataset read_dataset(const std::filesystem::path& path)
{
    return parse_dataset(csv::read_file(path));
}

csv::Table dataset_table(const Dataset& data)
{
    csv::Table t{{"subject", "approach", "experience", "faults"}, {}};
    for (const auto& o : data.observations())
        t.rows.push_back({std::to_string(o.subject), std::to_string(o.approach), std::to_string(o.experience),
                          std::to_string(o.faults)});
    return t;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data)
{
    csv::write_file(path, dataset_table(data));
}

csv::Table draws_table(const mcmc::Draws& draws)
{
    csv::Table t;
    t.header = {"chain", "iteration"};
    t.header.insert(t.header.end(), draws.names.begin(), draws.names.end());
    for (int c = 0; c < draws.chains; ++c)
        for (int d = 0; d < draws.draws_per_chain; ++d) {
            std::vector<std::string> row{std::to_string(c), std::to_string(d)};
            for (std::size_t p = 0; p < draws.dimension(); ++p)
                row.push_back(format_double(draws.at(c, d, p)));
            t.rows.push_back(std::move(row));
        }
    return t;
}

mcmc::Draws parse_draws(const csv::Table& table)
{
    if (table.header.size() < 3 || table.header[0] != "chain" || table.header[1] != "iteration")
        throw InputError("draws file must start with columns chain,iteration");
    if (table.rows.empty())
        throw InputError("draws file has no rows");
    mcmc::Draws d;
    d.names.assign(table.header.begin() + 2, table.header.end());
    int expected_chain = 0;
    int expected_iter = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const std::string ctx = "draws row " + std::to_string(i + 1);
        const auto chain = csv::parse_integer(r[0], ctx);
        const auto iter = csv::parse_integer(r[1], ctx);
        if (chain == expected_chain + 1 && iter == 0) {
            if (expected_chain == 0)
                d.draws_per_chain = expected_iter;
            else if (expected_iter != d.draws_per_chain)
                throw InputError("draws file has chains of unequal length");
            ++expected_chain;
            expected_iter = 0;
        }
        if (chain != expected_chain || iter != expected_iter)
            throw InputError(ctx + ": draws must be ordered by chain then iteration");
        ++expected_iter;
        for (std::size_t p = 2; p < r.size(); ++p)
            d.values.push_back(csv::parse_double(r[p], ctx));
    }
    if (expected_chain == 0)
        d.draws_per_chain = expected_iter;
    else if (expected_iter != d.draws_per_chain)
        throw InputError("draws file has chains of unequal length");
    d.chains = expected_chain + 1;
    d.acceptance_rate.assign(static_cast<std::size_t>(d.chains), 0.0);
    return d;
}

std::filesystem::path meta_path(const std::filesystem::path& draws_path)
{
    auto p = draws_path;
    return p.replace_extension(".meta.json");
}

std::filesystem::path diagnostics_path(const std::filesystem::path& draws_path)
{
    auto p = draws_path;
    return p.replace_extension(".diagnostics.csv");
}

void save_posterior(const std::filesystem::path& draws_path, const Posterior& post,
                    const mcmc::SamplerConfig& config)
{
    csv::write_file(draws_path, draws_table(post.draws));
    csv::write_file(diagnostics_path(draws_path), diagnostics_table(post.diagnostics));

    nlohmann::json meta;
    meta["model"] = to_string(post.model.kind);
    meta["zi_link"] = to_string(post.model.zi_link);
    meta["estimate_subject_mean"] = post.model.estimate_subject_mean;
    meta["prior_sd"] = post.model.prior_sd;
    meta["sigma_prior_scale"] = post.model.sigma_prior_scale;
    meta["n_subjects"] = post.data.n_subjects;
    meta["n_observations"] = post.data.n_observations;
    meta["data_fingerprint"] = hex(post.data.hash);
    meta["seed"] = post.seed;
    meta["chains"] = config.chains;
    meta["warmup"] = config.warmup_iterations;
    meta["draws"] = config.retained_draws_per_chain;
    meta["target_acceptance"] = config.target_acceptance;
    nlohmann::json acceptance = nlohmann::json::array();
    for (double a : post.draws.acceptance_rate)
        acceptance.push_back(a);
    meta["acceptance_rate"] = acceptance;
    std::ofstream out(meta_path(draws_path), std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + meta_path(draws_path).string() + "'");
    out << meta.dump(2) << '\n';
}

Posterior load_posterior(const std::filesystem::path& draws_path)
{
    mcmc::Draws draws = parse_draws(csv::read_file(draws_path));
    ModelSpec spec;
    DataFingerprint fp;
    std::uint64_t seed = 0;
    const auto mp = meta_path(draws_path);
    if (std::filesystem::exists(mp)) {
        std::ifstream in(mp);
        nlohmann::json meta;
        try {
            in >> meta;
            spec.kind = parse_model_kind(meta.at("model").get<std::string>());
            spec.zi_link = parse_zi_link(meta.at("zi_link").get<std::string>());
            spec.estimate_subject_mean = meta.value("estimate_subject_mean", false);
            spec.prior_sd = meta.value("prior_sd", 1.5);
            spec.sigma_prior_scale = meta.value("sigma_prior_scale", 1.0);
            fp.n_subjects = meta.at("n_subjects").get<int>();
            fp.n_observations = meta.at("n_observations").get<std::size_t>();
            fp.hash = std::stoull(meta.at("data_fingerprint").get<std::string>(), nullptr, 16);
            seed = meta.value("seed", std::uint64_t{0});
            if (meta.contains("acceptance_rate") &&
                meta["acceptance_rate"].size() == static_cast<std::size_t>(draws.chains))
                draws.acceptance_rate = meta["acceptance_rate"].get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError("malformed metadata '" + mp.string() + "': " + e.what());
        } catch (const ConfigError& e) {
            throw InputError("malformed metadata '" + mp.string() + "': " + e.what());
        }
    } else {
        const auto& n = draws.names;
        spec.kind = std::find(n.begin(), n.end(), "alpha_p") != n.end() ? ModelKind::M2 : ModelKind::M1;
        spec.estimate_subject_mean = std::find(n.begin(), n.end(), "mu_s") != n.end();
        if (spec.kind == ModelKind::M2)
            fp.n_subjects = static_cast<int>(n.size() - population_dimension(spec));
    }
    return Posterior::from_draws(std::move(draws), spec, fp, seed);
}

csv::Table diagnostics_table(const std::vector<mcmc::ParameterDiagnostics>& diagnostics)
{
    csv::Table t{{"parameter", "rhat", "ess_bulk"}, {}};
    for (const auto& d : diagnostics)
        t.rows.push_back({d.name, optional_number(d.rhat), optional_number(d.ess)});
    return t;
}

csv::Table summary_table(const std::vector<SummaryRow>& rows)
{
    csv::Table t{{"parameter", "mean", "sd", "ci_lo", "ci_hi"}, {}};
    for (const auto& r : rows)
        t.rows.push_back(
            {r.parameter, format_double(r.mean), format_double(r.sd), format_double(r.ci_lo), format_double(r.ci_hi)});
    return t;
}

csv::Table histogram_table(const MarginalDensity& density)
{
    csv::Table t{{"edge_lo", "edge_hi", "height"}, {}};
    for (std::size_t b = 0; b < density.heights.size(); ++b)
        t.rows.push_back(
            {format_double(density.edges[b]), format_double(density.edges[b + 1]), format_double(density.heights[b])});
    return t;
}

csv::Table predictive_table(const PredictiveDistribution& pd)
{
    csv::Table t{{"draw", pd.mode == PredictiveMode::expectation ? "expected_faults" : "faults"}, {}};
    const auto s = pd.samples();
    for (std::size_t i = 0; i < s.size(); ++i)
        t.rows.push_back({std::to_string(i),
                          pd.mode == PredictiveMode::expectation ? format_double(s[i]) : std::to_string(pd.counts[i])});
    return t;
}

csv::Table comparison_table(const ComparisonResult& result)
{
    csv::Table t{{"model", "elpd", "se", "p_eff", "rank", "elpd_diff", "diff_se", "elpd_waic", "waic_se",
                  "max_pareto_k", "n_high_k"},
                 {}};
    for (const auto& m : result.models) {
        std::optional<double> max_k;
        for (const auto& k : m.loo.pareto_k)
            if (k && (!max_k || *k > *max_k))
                max_k = k;
        t.rows.push_back({m.label, format_double(m.loo.elpd), format_double(m.loo.se), format_double(m.loo.p_eff),
                          std::to_string(m.rank), format_double(m.elpd_diff), format_double(m.diff_se),
                          format_double(m.waic.elpd), format_double(m.waic.se), optional_number(max_k),
                          std::to_string(m.loo.flagged().size())});
    }
    return t;
}

csv::Table report_table(const scenarios::UtilityReport& report)
{
    csv::Table t{{"option", "utility", "mc_se", "tail_lo_value", "tail_lo_p", "central_value", "central_p",
                  "tail_hi_value", "tail_hi_p"},
                 {}};
    for (const auto& o : report.options)
        t.rows.push_back({o.label, format_double(o.utility), format_double(o.mc_se), format_double(o.tails[0].value),
                          format_double(o.tails[0].probability), format_double(o.tails[1].value),
                          format_double(o.tails[1].probability), format_double(o.tails[2].value),
                          format_double(o.tails[2].probability)});
    return t;
}

csv::Table sweep_table(const scenarios::SweepTable& table)
{
    csv::Table t;
    t.header = {scenarios::to_string(table.parameter)};
    t.header.insert(t.header.end(), table.labels.begin(), table.labels.end());
    t.header.push_back("argmax");
    for (const auto& r : table.rows) {
        std::vector<std::string> row{format_double(r.value)};
        for (double u : r.utilities)
            row.push_back(format_double(u));
        row.push_back(table.labels[r.best]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

csv::Table summary_stats_table(const std::vector<synthetic::GroupStats>& stats)
{
    csv::Table t{{"experience", "n", "median", "mean", "sd", "min", "max"}, {}};
    for (const auto& g : stats)
        t.rows.push_back({g.group, std::to_string(g.n), format_double(g.median), format_double(g.mean),
                          optional_number(g.sd), format_double(g.min), format_double(g.max)});
    return t;
}

} // namespace practsig::io
