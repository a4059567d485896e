#include "practsig/cli.hpp"

#include "config.hpp"
#include "practsig/error.hpp"
#include "practsig/io.hpp"
#include "practsig/model_compare.hpp"
#include "practsig/posterior.hpp"
#include "practsig/scenarios.hpp"
#include "practsig/synthetic.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <iostream>
#include <map>

namespace practsig {

namespace {

namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_numeric = 3;
constexpr int exit_diagnostic = 4;
constexpr double rhat_limit = 1.05;

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

void print_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows)
            width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c == 0)
                s += fmt::format("{:<{}}", r[c], width[c]);
            else
                s += fmt::format("  {:>{}}", r[c], width[c]);
        }
        os << s << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (auto w : width)
        total += w + 2;
    os << std::string(total - 2, '-') << '\n';
    for (const auto& r : rows)
        line(r);
}

std::string f2(double v)
{
    return fmt::format("{:.2f}", v);
}

std::string f2(const std::optional<double>& v)
{
    return v ? f2(*v) : "NA";
}

/// Output paths may not coincide with any input path.
void check_distinct(const fs::path& out, const std::vector<fs::path>& inputs)
{
    const auto o = fs::weakly_canonical(out);
    for (const auto& in : inputs)
        if (!in.empty() && fs::weakly_canonical(in) == o)
            throw ConfigError("output path '" + out.string() + "' is also an input");
}

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos)
            return parts;
        start = pos + 1;
    }
}

/// Options shared by several commands. Flags override the config file.
struct Common {
    std::string config_path;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    std::string out;

    cli::RunConfig load() const
    {
        cli::RunConfig cfg = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
        if (seed_opt != nullptr && seed_opt->count() > 0)
            cfg.seed = seed;
        return cfg;
    }
};

std::uint64_t require_seed(const cli::RunConfig& cfg)
{
    if (!cfg.seed)
        throw ConfigError("a seed is required (--seed or \"seed\" in the config)");
    return *cfg.seed;
}

void require_out(const std::string& out)
{
    if (out.empty())
        throw ConfigError("--out is required");
}

bool given(const CLI::Option* opt)
{
    return opt != nullptr && opt->count() > 0;
}

MixtureComposition composition_for(const std::string& name, const std::string& data_path)
{
    if (name == "dataset") {
        if (data_path.empty())
            throw ConfigError("composition 'dataset' needs --data");
        return MixtureComposition::from_dataset(io::read_dataset(data_path));
    }
    return MixtureComposition::parse(name);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    std::string truth = "paper-means";
    std::string design = "paper";
    int scale = 1;
    std::string model;
    std::string zi_link;
};

int cmd_simulate(const SimulateArgs& a, Streams io_)
{
    require_out(a.common.out);
    cli::RunConfig cfg = a.common.load();
    const std::uint64_t seed = require_seed(cfg);
    if (!a.model.empty())
        cfg.model.kind = parse_model_kind(a.model);
    if (!a.zi_link.empty())
        cfg.model.zi_link = parse_zi_link(a.zi_link);

    ParameterVector truth;
    std::vector<fs::path> inputs;
    if (a.truth == "paper-means") {
        truth = synthetic::paper_means();
    } else {
        truth = cli::load_truth(a.truth);
        inputs.emplace_back(a.truth);
    }
    synthetic::DesignSpec design;
    if (a.design == "paper") {
        if (a.scale < 1)
            throw ConfigError("--scale must be positive");
        design = synthetic::DesignSpec::paper(a.scale);
    } else {
        design = cli::load_design(a.design);
        inputs.emplace_back(a.design);
    }
    check_distinct(a.common.out, inputs);

    Dataset data = [&] {
        try {
            return synthetic::generate(truth, design, cfg.model, seed);
        } catch (const DomainError& e) {
            throw InputError(std::string("invalid truth: ") + e.what());
        }
    }();
    io::write_dataset(a.common.out, data);

    std::vector<std::vector<std::string>> rows;
    for (const auto& g : synthetic::summary_stats(data))
        rows.push_back({g.group, std::to_string(g.n), f2(g.median), f2(g.mean), f2(g.sd), f2(g.min), f2(g.max)});
    fmt::print(io_.out, "simulated {} observations of {} subjects ({})\n", data.size(), data.n_subjects(),
               to_string(cfg.model.kind));
    print_table(io_.out, {"experience", "n", "median", "mean", "sd", "min", "max"}, rows);
    return exit_ok;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    Common common;
    std::string data;
    std::string model;
    std::string zi_link;
    std::string covariance;
    int chains = 0;
    int warmup = 0;
    int draws = 0;
    CLI::Option* chains_opt = nullptr;
    CLI::Option* warmup_opt = nullptr;
    CLI::Option* draws_opt = nullptr;
};

void print_summary(std::ostream& os, const std::vector<SummaryRow>& rows, double ci,
                   const std::vector<mcmc::ParameterDiagnostics>* diagnostics)
{
    const int pct = static_cast<int>(std::lround(ci * 100.0));
    std::vector<std::string> header{"parameter", "mean", "sd", fmt::format("{}% lo", pct), fmt::format("{}% hi", pct)};
    if (diagnostics != nullptr) {
        header.push_back("rhat");
        header.push_back("ess_bulk");
    }
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        std::vector<std::string> row{r.parameter, f2(r.mean), f2(r.sd), f2(r.ci_lo), f2(r.ci_hi)};
        if (diagnostics != nullptr) {
            const auto it = std::find_if(diagnostics->begin(), diagnostics->end(),
                                         [&](const auto& d) { return d.name == r.parameter; });
            row.push_back(it != diagnostics->end() && it->rhat ? fmt::format("{:.3f}", *it->rhat) : "NA");
            row.push_back(it != diagnostics->end() && it->ess ? fmt::format("{:.0f}", *it->ess) : "NA");
        }
        out.push_back(std::move(row));
    }
    print_table(os, header, out);
}

int cmd_fit(const FitArgs& a, Streams io_)
{
    require_out(a.common.out);
    if (a.data.empty())
        throw ConfigError("--data is required");
    cli::RunConfig cfg = a.common.load();
    const std::uint64_t seed = require_seed(cfg);
    if (!a.model.empty())
        cfg.model.kind = parse_model_kind(a.model);
    if (!a.zi_link.empty())
        cfg.model.zi_link = parse_zi_link(a.zi_link);
    if (!a.covariance.empty()) {
        if (a.covariance == "dense")
            cfg.sampler.covariance = mcmc::ProposalCovariance::dense;
        else if (a.covariance == "diagonal")
            cfg.sampler.covariance = mcmc::ProposalCovariance::diagonal;
        else
            throw ConfigError("--covariance must be dense or diagonal");
    }
    if (given(a.chains_opt))
        cfg.sampler.chains = a.chains;
    if (given(a.warmup_opt))
        cfg.sampler.warmup_iterations = a.warmup;
    if (given(a.draws_opt))
        cfg.sampler.retained_draws_per_chain = a.draws;
    cfg.sampler.seed = seed;
    cfg.sampler.validate();

    const fs::path out = a.common.out;
    check_distinct(out, {a.data});
    check_distinct(io::meta_path(out), {a.data});
    check_distinct(io::diagnostics_path(out), {a.data});

    const Dataset data = io::read_dataset(a.data);
    const Posterior post = fit(data, cfg.model, cfg.sampler);
    io::save_posterior(out, post, cfg.sampler);

    fmt::print(io_.out, "{} fitted to {} observations: {} chains x {} draws (warmup {})\n",
               to_string(cfg.model.kind), data.size(), cfg.sampler.chains, cfg.sampler.retained_draws_per_chain,
               cfg.sampler.warmup_iterations);
    print_summary(io_.out, summarize(post, cfg.ci_level), cfg.ci_level, &post.diagnostics);

    if (cfg.sampler.chains == 1) {
        io_.err << "warning: R-hat is undefined with a single chain; convergence was not checked\n";
        return exit_ok;
    }
    std::vector<std::string> bad;
    for (const auto& d : post.diagnostics)
        if (d.rhat && *d.rhat > rhat_limit)
            bad.push_back(fmt::format("{} ({:.3f})", d.name, *d.rhat));
    if (!bad.empty()) {
        io_.err << "error: R-hat above " << rhat_limit << " for:";
        for (const auto& b : bad)
            io_.err << ' ' << b;
        io_.err << '\n';
        return exit_diagnostic;
    }
    return exit_ok;
}

// ---------------------------------------------------------------- summarize

struct SummarizeArgs {
    Common common;
    std::string draws;
    std::string model;
    double ci = 0.0;
    CLI::Option* ci_opt = nullptr;
    bool subjects = false;
    std::string histogram;
    int bins = 40;
    std::string hist_out;
};

Posterior load_checked(const std::string& path, const std::string& model)
{
    Posterior post = io::load_posterior(path);
    if (!model.empty() && parse_model_kind(model) != post.model.kind)
        throw InputError("draws '" + path + "' hold a " + to_string(post.model.kind) + " posterior, not " +
                         to_string(parse_model_kind(model)));
    return post;
}

int cmd_summarize(const SummarizeArgs& a, Streams io_)
{
    require_out(a.common.out);
    if (a.draws.empty())
        throw ConfigError("--draws is required");
    cli::RunConfig cfg = a.common.load();
    if (given(a.ci_opt))
        cfg.ci_level = a.ci;
    check_distinct(a.common.out, {a.draws});
    const Posterior post = load_checked(a.draws, a.model);
    const auto rows = summarize(post, cfg.ci_level, a.subjects);
    csv::write_file(a.common.out, io::summary_table(rows));
    print_summary(io_.out, rows, cfg.ci_level, nullptr);

    if (!a.histogram.empty()) {
        if (a.hist_out.empty())
            throw ConfigError("--histogram needs --hist-out");
        check_distinct(a.hist_out, {a.draws, a.common.out});
        const auto density = marginal_density(post, a.histogram, a.bins, cfg.ci_level);
        csv::write_file(a.hist_out, io::histogram_table(density));
        fmt::print(io_.out, "{}: median {:.2f}, P({} < 0) = {:.3f}\n", a.histogram, density.median, a.histogram,
                   density.prob_below_zero);
    }
    return exit_ok;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
    Common common;
    std::vector<std::string> draws;
    std::string data;
};

int cmd_compare(const CompareArgs& a, Streams io_)
{
    require_out(a.common.out);
    if (a.draws.size() < 2)
        throw ConfigError("compare needs at least two --draws files");
    if (a.data.empty())
        throw ConfigError("--data is required");
    std::vector<fs::path> inputs(a.draws.begin(), a.draws.end());
    inputs.emplace_back(a.data);
    check_distinct(a.common.out, inputs);

    const Dataset data = io::read_dataset(a.data);
    std::vector<LogLikMatrix> matrices;
    std::map<std::string, int> seen;
    for (const auto& path : a.draws) {
        const Posterior post = io::load_posterior(path);
        std::string label = fs::path(path).stem().string();
        if (seen[label]++ > 0)
            label = path;
        matrices.push_back(pointwise_log_likelihood(post, data, label));
    }
    const ComparisonResult result = compare(matrices);
    csv::write_file(a.common.out, io::comparison_table(result));

    std::vector<std::vector<std::string>> rows;
    for (const auto& m : result.models)
        rows.push_back({m.label, std::to_string(m.rank), f2(m.loo.elpd), f2(m.loo.se), f2(m.loo.p_eff),
                        f2(m.elpd_diff), f2(m.diff_se), f2(m.waic.elpd), std::to_string(m.loo.flagged().size())});
    print_table(io_.out, {"model", "rank", "elpd_loo", "se", "p_loo", "elpd_diff", "diff_se", "elpd_waic", "k>0.7"},
                rows);
    for (const auto& m : result.models)
        if (!m.loo.flagged().empty())
            fmt::print(io_.err, "warning: {}: {} observations with Pareto k > 0.7; PSIS-LOO may be unreliable\n",
                       m.label, m.loo.flagged().size());
    return exit_ok;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
    Common common;
    std::string draws;
    std::string model;
    std::vector<std::string> settings;
    std::string mode;
    std::string subject;
    int n_rep = 0;
    CLI::Option* n_rep_opt = nullptr;
    std::string composition;
    std::string data;
    double ci = 0.0;
    CLI::Option* ci_opt = nullptr;
    std::string samples_out;
};

int cmd_predict(const PredictArgs& a, Streams io_)
{
    require_out(a.common.out);
    if (a.draws.empty())
        throw ConfigError("--draws is required");
    cli::RunConfig cfg = a.common.load();
    const std::uint64_t seed = require_seed(cfg);
    if (!a.mode.empty())
        cfg.predictive.mode = parse_predictive_mode(a.mode);
    if (!a.subject.empty())
        cfg.predictive.subject = parse_subject_mode(a.subject);
    if (given(a.n_rep_opt))
        cfg.predictive.n_rep = a.n_rep;
    if (given(a.ci_opt))
        cfg.ci_level = a.ci;
    if (!a.composition.empty())
        cfg.composition = a.composition;
    cfg.predictive.seed = seed;
    check_distinct(a.common.out, {a.draws, a.data});
    if (!a.samples_out.empty())
        check_distinct(a.samples_out, {a.draws, a.data, a.common.out});

    const Posterior post = load_checked(a.draws, a.model);
    const MixtureComposition mix = composition_for(cfg.composition, a.data);
    std::vector<std::string> names = a.settings;
    if (names.empty())
        names = {"exploratory-low", "exploratory-high", "testcase-low", "testcase-high", "exploratory", "testcase",
                 "low", "high", "mixed"};

    csv::Table summary{{"setting", "testcase_weight", "high_weight", "mean", "ci_lo", "ci_hi"}, {}};
    csv::Table samples{{"setting", "draw", "value"}, {}};
    std::vector<std::vector<std::string>> rows;
    for (const auto& name : names) {
        const PredictorSetting setting = parse_setting(name, mix);
        PredictiveOptions opts = cfg.predictive;
        opts.seed = derive_seed(seed, fnv1a(name));
        const auto pd = posterior_predictive(post, setting, opts);
        const auto iv = predictive_interval(pd, cfg.ci_level);
        summary.rows.push_back({name, csv::format_double(setting.testcase_weight),
                                csv::format_double(setting.high_experience_weight), csv::format_double(iv.mean),
                                csv::format_double(iv.lo), csv::format_double(iv.hi)});
        rows.push_back({name, f2(iv.mean), f2(iv.lo), f2(iv.hi)});
        if (!a.samples_out.empty()) {
            const auto s = pd.samples();
            for (std::size_t i = 0; i < s.size(); ++i)
                samples.rows.push_back({name, std::to_string(i), csv::format_double(s[i])});
        }
    }
    csv::write_file(a.common.out, summary);
    if (!a.samples_out.empty())
        csv::write_file(a.samples_out, samples);
    const int pct = static_cast<int>(std::lround(cfg.ci_level * 100.0));
    fmt::print(io_.out, "{} predictive distribution ({} subject)\n", to_string(cfg.predictive.mode),
               to_string(cfg.predictive.subject));
    print_table(io_.out, {"setting", "mean", fmt::format("{}% lo", pct), fmt::format("{}% hi", pct)}, rows);
    return exit_ok;
}

// ---------------------------------------------------------------- utility

struct UtilityArgs {
    Common common;
    std::string draws;
    std::string model;
    std::string scenario;
    std::string sweep;
    std::string composition;
    std::string data;
    std::string subject;
    std::string weighting;
    int n_rep = 0;
    CLI::Option* n_rep_opt = nullptr;
    std::map<std::string, std::pair<double, CLI::Option*>> numbers;
};

double number(const UtilityArgs& a, const std::string& key, double fallback)
{
    const auto& [value, opt] = a.numbers.at(key);
    return opt->count() > 0 ? value : fallback;
}

int cmd_utility(const UtilityArgs& a, Streams io_)
{
    require_out(a.common.out);
    if (a.draws.empty())
        throw ConfigError("--draws is required");
    if (a.scenario.empty())
        throw ConfigError("--scenario is required");
    cli::RunConfig cfg = a.common.load();
    const std::uint64_t seed = require_seed(cfg);
    if (!a.composition.empty())
        cfg.composition = a.composition;
    if (!a.subject.empty())
        cfg.predictive.subject = parse_subject_mode(a.subject);
    if (given(a.n_rep_opt))
        cfg.predictive.n_rep = a.n_rep;
    if (!a.weighting.empty())
        cfg.weighting.mode = cpt::parse_weighting_mode(a.weighting);
    cfg.costs.savings_per_fault = number(a, "S", cfg.costs.savings_per_fault);
    cfg.costs.hourly_low = number(a, "C_low", cfg.costs.hourly_low);
    cfg.costs.hourly_high = number(a, "C_high", cfg.costs.hourly_high);
    cfg.costs.hourly_mixed = number(a, "C_mixed", cfg.costs.hourly_mixed);
    cfg.costs.session_hours = number(a, "h", cfg.costs.session_hours);
    cfg.weighting.gamma_gain = number(a, "gamma_gain", cfg.weighting.gamma_gain);
    cfg.weighting.gamma_loss = number(a, "gamma_loss", cfg.weighting.gamma_loss);
    cfg.costs.validate();
    cfg.weighting.validate();
    check_distinct(a.common.out, {a.draws, a.data});

    const Posterior post = load_checked(a.draws, a.model);
    const MixtureComposition mix = composition_for(cfg.composition, a.data);
    const auto custom = std::find_if(cfg.scenarios.begin(), cfg.scenarios.end(),
                                     [&](const auto& s) { return s.name == a.scenario; });
    const scenarios::Scenario scenario =
        custom != cfg.scenarios.end() ? *custom : scenarios::preset(a.scenario, mix);

    scenarios::EvaluationOptions eval;
    eval.seed = seed;
    eval.n_rep = cfg.predictive.n_rep;
    eval.subject = cfg.predictive.subject;

    if (!a.sweep.empty()) {
        const auto eq = a.sweep.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--sweep expects PARAM=v1,v2,...");
        const auto parameter = scenarios::parse_sweep_parameter(a.sweep.substr(0, eq));
        std::vector<double> values;
        for (const auto& v : split(a.sweep.substr(eq + 1), ','))
            values.push_back(csv::parse_double(v, "--sweep value"));
        const auto table =
            scenarios::sensitivity_sweep(post, scenario, cfg.costs, cfg.weighting, parameter, values, eval);
        csv::write_file(a.common.out, io::sweep_table(table));
        std::vector<std::string> header{scenarios::to_string(parameter)};
        header.insert(header.end(), table.labels.begin(), table.labels.end());
        header.push_back("best");
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : table.rows) {
            std::vector<std::string> row{f2(r.value)};
            for (double u : r.utilities)
                row.push_back(f2(u));
            row.push_back(table.labels[r.best]);
            rows.push_back(std::move(row));
        }
        fmt::print(io_.out, "scenario '{}': expected utility by {}\n", scenario.name, scenarios::to_string(parameter));
        print_table(io_.out, header, rows);
        return exit_ok;
    }

    const auto report = scenarios::evaluate_scenario(post, scenario, cfg.costs, cfg.weighting, eval);
    csv::write_file(a.common.out, io::report_table(report));
    std::vector<std::vector<std::string>> rows;
    for (const auto& o : report.options)
        rows.push_back({o.label, to_string(o.cost), f2(o.utility), f2(o.mc_se), f2(o.expected_value),
                        f2(o.tails[0].value), f2(o.tails[1].value), f2(o.tails[2].value)});
    fmt::print(io_.out, "scenario '{}' (S = {:.2f}, h = {:.2f})\n", scenario.name, cfg.costs.savings_per_fault,
               cfg.costs.session_hours);
    print_table(io_.out, {"option", "cost", "E_U", "mc_se", "E[value]", "lower 3%", "central 94%", "upper 3%"},
                rows);
    fmt::print(io_.out, "best: {}\n", report.options[report.best].label);
    return exit_ok;
}

void add_common(CLI::App* cmd, Common& c, bool with_seed)
{
    cmd->add_option("--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "output CSV");
    if (with_seed)
        c.seed_opt = cmd->add_option("--seed", c.seed, "random seed");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bayesian fault-count models and prospect-theory utilities", "practsig"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "practsig 0.1.0");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "simulate a dataset from a model");
    add_common(c_sim, sim.common, true);
    c_sim->add_option("--truth", sim.truth, "paper-means or a JSON file of parameter values");
    c_sim->add_option("--design", sim.design, "paper or a JSON design file");
    c_sim->add_option("--scale", sim.scale, "multiplier on every cell of the paper design");
    c_sim->add_option("--model", sim.model, "m1 or m2");
    c_sim->add_option("--zi-link", sim.zi_link, "logit or log");

    FitArgs fa;
    auto* c_fit = app.add_subcommand("fit", "fit a model by MCMC");
    add_common(c_fit, fa.common, true);
    c_fit->add_option("--data", fa.data, "data CSV");
    c_fit->add_option("--model", fa.model, "m1 or m2");
    c_fit->add_option("--zi-link", fa.zi_link, "logit or log");
    c_fit->add_option("--covariance", fa.covariance, "dense or diagonal proposal covariance");
    fa.chains_opt = c_fit->add_option("--chains", fa.chains);
    fa.warmup_opt = c_fit->add_option("--warmup", fa.warmup);
    fa.draws_opt = c_fit->add_option("--draws", fa.draws);

    SummarizeArgs sa;
    auto* c_sum = app.add_subcommand("summarize", "posterior summary table");
    add_common(c_sum, sa.common, false);
    c_sum->add_option("--draws", sa.draws, "draws CSV");
    c_sum->add_option("--model", sa.model, "expected model (m1 or m2)");
    sa.ci_opt = c_sum->add_option("--ci", sa.ci, "credible interval level");
    c_sum->add_flag("--subjects", sa.subjects, "include subject offsets");
    c_sum->add_option("--histogram", sa.histogram, "parameter for a marginal histogram");
    c_sum->add_option("--bins", sa.bins, "histogram bins");
    c_sum->add_option("--hist-out", sa.hist_out, "histogram CSV");

    CompareArgs ca;
    auto* c_cmp = app.add_subcommand("compare", "PSIS-LOO and WAIC model comparison");
    add_common(c_cmp, ca.common, false);
    c_cmp->add_option("--draws", ca.draws, "draws CSV (repeat for each model)");
    c_cmp->add_option("--data", ca.data, "data CSV the models were fitted on");

    PredictArgs pa;
    auto* c_pred = app.add_subcommand("predict", "posterior predictive distributions");
    add_common(c_pred, pa.common, true);
    c_pred->add_option("--draws", pa.draws, "draws CSV");
    c_pred->add_option("--model", pa.model, "expected model (m1 or m2)");
    c_pred->add_option("--setting", pa.settings, "predictor setting (repeatable)");
    c_pred->add_option("--mode", pa.mode, "expectation or outcome");
    c_pred->add_option("--subject", pa.subject, "fresh or average");
    pa.n_rep_opt = c_pred->add_option("--n-rep", pa.n_rep, "outcome draws per posterior draw");
    c_pred->add_option("--composition", pa.composition, "table, text, or dataset");
    c_pred->add_option("--data", pa.data, "data CSV (composition dataset)");
    pa.ci_opt = c_pred->add_option("--ci", pa.ci, "interval level");
    c_pred->add_option("--samples-out", pa.samples_out, "per-draw samples CSV");

    UtilityArgs ua;
    auto* c_util = app.add_subcommand("utility", "prospect-theory utilities of a decision scenario");
    add_common(c_util, ua.common, true);
    c_util->add_option("--draws", ua.draws, "draws CSV");
    c_util->add_option("--model", ua.model, "expected model (m1 or m2)");
    c_util->add_option("--scenario", ua.scenario, "approach, experience, exploratory, or a config scenario");
    c_util->add_option("--sweep", ua.sweep, "PARAM=v1,v2,... with PARAM in S, C_low, C_high, C_mixed, h");
    c_util->add_option("--composition", ua.composition, "table, text, or dataset");
    c_util->add_option("--data", ua.data, "data CSV (composition dataset)");
    c_util->add_option("--subject", ua.subject, "fresh or average");
    c_util->add_option("--weighting", ua.weighting, "cumulative or pointwise");
    ua.n_rep_opt = c_util->add_option("--n-rep", ua.n_rep, "outcome draws per posterior draw");
    struct NumberFlag {
        const char* flag;
        const char* key;
        const char* help;
    };
    for (const auto& [flag, key, help] : {NumberFlag{"--S", "S", "savings per fault found"},
                                          NumberFlag{"--c-low", "C_low", "hourly cost, low experience"},
                                          NumberFlag{"--c-high", "C_high", "hourly cost, high experience"},
                                          NumberFlag{"--c-mixed", "C_mixed", "hourly cost, mixed pool"},
                                          NumberFlag{"--hours", "h", "session length in hours"},
                                          NumberFlag{"--gamma-gain", "gamma_gain", "weighting curvature for gains"},
                                          NumberFlag{"--gamma-loss", "gamma_loss", "weighting curvature for losses"}}) {
        auto& slot = ua.numbers[key];
        slot.second = c_util->add_option(flag, slot.first, help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    const Streams streams{out, err};
    try {
        if (c_sim->parsed())
            return cmd_simulate(sim, streams);
        if (c_fit->parsed())
            return cmd_fit(fa, streams);
        if (c_sum->parsed())
            return cmd_summarize(sa, streams);
        if (c_cmp->parsed())
            return cmd_compare(ca, streams);
        if (c_pred->parsed())
            return cmd_predict(pa, streams);
        return cmd_utility(ua, streams);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const InitializationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    }
}

int run_cli(int argc, const char* const* argv)
{
    return run_cli(argc, argv, std::cout, std::cerr);
}

} // namespace practsig
