#include "config.hpp"

#include "practsig/error.hpp"
#include "practsig/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace practsig::cli {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json parse_json(const std::string& text, const std::string& what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + " is not valid JSON: " + e.what());
    }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where)
{
    if (!obj.contains(key))
        return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "' in " + where);
    }
}

PredictorSetting setting_from_json(const json& j, const MixtureComposition& mix, const std::string& where)
{
    if (j.is_string())
        return parse_setting(j.get<std::string>(), mix);
    check_keys(j, {"testcase", "high"}, where);
    PredictorSetting s;
    read(j, "testcase", s.testcase_weight, where);
    read(j, "high", s.high_experience_weight, where);
    s.validate();
    return s;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    const json doc = parse_json(text, "config");
    check_keys(doc,
               {"model", "zi_link", "estimate_subject_mean", "seed", "sampler", "ci", "costs", "weighting",
                "predictive", "composition", "scenarios"},
               "config");
    RunConfig cfg;
    std::string s;
    if (doc.contains("model")) {
        read(doc, "model", s, "config");
        cfg.model.kind = parse_model_kind(s);
    }
    if (doc.contains("zi_link")) {
        read(doc, "zi_link", s, "config");
        cfg.model.zi_link = parse_zi_link(s);
    }
    read(doc, "estimate_subject_mean", cfg.model.estimate_subject_mean, "config");
    if (doc.contains("seed")) {
        std::uint64_t seed = 0;
        read(doc, "seed", seed, "config");
        cfg.seed = seed;
    }
    read(doc, "ci", cfg.ci_level, "config");
    read(doc, "composition", cfg.composition, "config");

    if (doc.contains("sampler")) {
        const auto& j = doc["sampler"];
        check_keys(j, {"chains", "warmup", "draws", "target_acceptance", "covariance", "parallel"}, "sampler");
        read(j, "chains", cfg.sampler.chains, "sampler");
        read(j, "warmup", cfg.sampler.warmup_iterations, "sampler");
        read(j, "draws", cfg.sampler.retained_draws_per_chain, "sampler");
        read(j, "target_acceptance", cfg.sampler.target_acceptance, "sampler");
        read(j, "parallel", cfg.sampler.parallel, "sampler");
        if (j.contains("covariance")) {
            read(j, "covariance", s, "sampler");
            if (s == "dense")
                cfg.sampler.covariance = mcmc::ProposalCovariance::dense;
            else if (s == "diagonal")
                cfg.sampler.covariance = mcmc::ProposalCovariance::diagonal;
            else
                throw ConfigError("sampler covariance must be dense or diagonal");
        }
    }
    if (doc.contains("costs")) {
        const auto& j = doc["costs"];
        check_keys(j, {"S", "C_low", "C_high", "C_mixed", "h"}, "costs");
        read(j, "S", cfg.costs.savings_per_fault, "costs");
        read(j, "C_low", cfg.costs.hourly_low, "costs");
        read(j, "C_high", cfg.costs.hourly_high, "costs");
        read(j, "C_mixed", cfg.costs.hourly_mixed, "costs");
        read(j, "h", cfg.costs.session_hours, "costs");
    }
    if (doc.contains("weighting")) {
        const auto& j = doc["weighting"];
        check_keys(j, {"gamma_gain", "gamma_loss", "mode", "power_value", "value_exponent", "loss_aversion"},
                   "weighting");
        read(j, "gamma_gain", cfg.weighting.gamma_gain, "weighting");
        read(j, "gamma_loss", cfg.weighting.gamma_loss, "weighting");
        read(j, "power_value", cfg.weighting.power_value, "weighting");
        read(j, "value_exponent", cfg.weighting.value_exponent, "weighting");
        read(j, "loss_aversion", cfg.weighting.loss_aversion, "weighting");
        if (j.contains("mode")) {
            read(j, "mode", s, "weighting");
            cfg.weighting.mode = cpt::parse_weighting_mode(s);
        }
    }
    if (doc.contains("predictive")) {
        const auto& j = doc["predictive"];
        check_keys(j, {"mode", "subject", "n_rep"}, "predictive");
        if (j.contains("mode")) {
            read(j, "mode", s, "predictive");
            cfg.predictive.mode = parse_predictive_mode(s);
        }
        if (j.contains("subject")) {
            read(j, "subject", s, "predictive");
            cfg.predictive.subject = parse_subject_mode(s);
        }
        read(j, "n_rep", cfg.predictive.n_rep, "predictive");
    }
    if (doc.contains("scenarios")) {
        const auto& list = doc["scenarios"];
        if (!list.is_array())
            throw ConfigError("scenarios must be an array");
        // Named settings resolve against the composition in force.
        const MixtureComposition mix =
            cfg.composition == "dataset" ? MixtureComposition{} : MixtureComposition::parse(cfg.composition);
        for (const auto& js : list) {
            check_keys(js, {"name", "options"}, "scenario");
            scenarios::Scenario sc;
            read(js, "name", sc.name, "scenario");
            if (sc.name.empty())
                throw ConfigError("scenario needs a name");
            if (!js.contains("options") || !js["options"].is_array())
                throw ConfigError("scenario '" + sc.name + "' needs an options array");
            for (const auto& jo : js["options"]) {
                const std::string where = "option of scenario '" + sc.name + "'";
                check_keys(jo, {"label", "setting", "cost"}, where);
                scenarios::ScenarioOption opt;
                read(jo, "label", opt.label, where);
                if (!jo.contains("setting"))
                    throw ConfigError(where + " needs a setting");
                opt.setting = setting_from_json(jo["setting"], mix, where);
                if (jo.contains("cost")) {
                    read(jo, "cost", s, where);
                    opt.cost = cpt::parse_cost_selector(s);
                }
                sc.options.push_back(std::move(opt));
            }
            sc.validate();
            cfg.scenarios.push_back(std::move(sc));
        }
    }
    cfg.model.validate();
    cfg.sampler.validate();
    cfg.costs.validate();
    cfg.weighting.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_text(path));
}

ParameterVector load_truth(const std::filesystem::path& path)
{
    const json doc = parse_json(read_text(path), "truth file");
    check_keys(doc, {"alpha", "beta_a", "beta_e", "alpha_p", "beta_p", "mu_s", "sigma_s"}, "truth file");
    ParameterVector truth = synthetic::paper_means();
    for (auto [key, field] : {std::pair{"alpha", &truth.alpha}, std::pair{"beta_a", &truth.beta_a},
                              std::pair{"beta_e", &truth.beta_e}, std::pair{"alpha_p", &truth.alpha_p},
                              std::pair{"beta_p", &truth.beta_p}, std::pair{"mu_s", &truth.mu_s},
                              std::pair{"sigma_s", &truth.sigma_s}}) {
        if (!doc.contains(key))
            continue;
        if (!doc[key].is_number())
            throw InputError(std::string("truth value '") + key + "' must be a number");
        *field = doc[key].get<double>();
    }
    return truth;
}

synthetic::DesignSpec load_design(const std::filesystem::path& path)
{
    const json doc = parse_json(read_text(path), "design file");
    check_keys(doc, {"cells", "sessions_per_subject"}, "design file");
    synthetic::DesignSpec design;
    read(doc, "sessions_per_subject", design.sessions_per_subject, "design file");
    if (!doc.contains("cells") || !doc["cells"].is_array())
        throw ConfigError("design file needs a cells array");
    for (const auto& jc : doc["cells"]) {
        check_keys(jc, {"approach", "experience", "subjects"}, "design cell");
        synthetic::DesignCell c;
        read(jc, "approach", c.approach, "design cell");
        read(jc, "experience", c.experience, "design cell");
        read(jc, "subjects", c.subjects, "design cell");
        design.cells.push_back(c);
    }
    design.validate();
    return design;
}

} // namespace practsig::cli
