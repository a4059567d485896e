#pragma once

#include "practsig/distributions.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace practsig {

enum class ModelKind {
    M1, ///< Poisson, population-level effects only.
    M2, ///< Zero-inflated Poisson with per-subject intercepts.
};

enum class ZeroInflationLink { logit, log };

std::string to_string(ModelKind kind);
std::string to_string(ZeroInflationLink link);
ModelKind parse_model_kind(const std::string& text);
ZeroInflationLink parse_zi_link(const std::string& text);

struct ModelSpec {
    ModelKind kind = ModelKind::M2;
    double prior_sd = 1.5;          ///< Normal(0, prior_sd) on every location parameter.
    double sigma_prior_scale = 1.0; ///< half-Cauchy(0, scale) on sigma_s.
    ZeroInflationLink zi_link = ZeroInflationLink::logit;
    /// When false, mu_s is pinned at 0: it only enters the likelihood through
    /// alpha + mu_s, so a free mu_s leaves alpha unidentified.
    bool estimate_subject_mean = false;

    void validate() const;
};

/// One testing trial. approach: 0 exploratory, 1 test-case based.
/// experience: 0 low, 1 high.
struct Observation {
    int subject = 0;
    int approach = 0;
    int experience = 0;
    std::int64_t faults = 0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

class Dataset {
public:
    /// Throws InputError when the invariants do not hold: nonempty, binary
    /// indicators, nonnegative counts, every subject in [0, n_subjects) has
    /// at least one observation.
    Dataset(std::vector<Observation> observations, int n_subjects);

    /// n_subjects is taken as max subject id + 1.
    static Dataset from_observations(std::vector<Observation> observations);

    const std::vector<Observation>& observations() const noexcept { return observations_; }
    std::size_t size() const noexcept { return observations_.size(); }
    int n_subjects() const noexcept { return n_subjects_; }
    /// Indices of the observations that belong to `subject`.
    std::span<const std::size_t> subject_rows(int subject) const;

    /// FNV-1a hash of the canonical row encoding (order-sensitive).
    std::uint64_t fingerprint() const;

private:
    std::vector<Observation> observations_;
    int n_subjects_;
    std::vector<std::vector<std::size_t>> rows_by_subject_;
};

struct ParameterVector {
    double alpha = 0.0;
    double beta_a = 0.0;
    double beta_e = 0.0;
    double alpha_p = 0.0;
    double beta_p = 0.0;
    double mu_s = 0.0;
    double sigma_s = 1.0;
    std::vector<double> z_subjects; ///< standardized subject offsets

    double subject_intercept(int subject) const { return mu_s + sigma_s * z_subjects.at(subject); }
};

/// Number of sampled parameters for `spec` with `n_subjects` subjects.
std::size_t parameter_dimension(const ModelSpec& spec, int n_subjects);
/// Column names of the natural-scale parameter vector, in packing order.
std::vector<std::string> parameter_names(const ModelSpec& spec, int n_subjects);
/// Number of population-level (non-z) parameters.
std::size_t population_dimension(const ModelSpec& spec);

std::vector<double> pack(const ParameterVector& params, const ModelSpec& spec);
ParameterVector unpack(std::span<const double> natural, const ModelSpec& spec, int n_subjects);

/// Same layout as `pack`, except sigma_s is stored as log(sigma_s).
/// `log_jacobian` receives log |d natural / d unconstrained| = log sigma_s.
ParameterVector from_unconstrained(std::span<const double> x, const ModelSpec& spec, int n_subjects,
                                   double* log_jacobian = nullptr);
std::vector<double> to_unconstrained(const ParameterVector& params, const ModelSpec& spec);
/// In-place variant of from_unconstrained; reuses `out`'s storage.
void from_unconstrained_into(std::span<const double> x, const ModelSpec& spec, int n_subjects, ParameterVector& out,
                             double* log_jacobian = nullptr);

struct LinearPredictors {
    Rate lambda;
    Probability p;
};

/// lambda = exp(alpha + beta_a*approach + beta_e*experience [+ subject intercept]),
/// p = link^-1(alpha_p + beta_p*approach) for M2 and 0 for M1.
LinearPredictors linear_predictors(const ParameterVector& params, const Observation& obs, const ModelSpec& spec);

struct LogLikelihood {
    double total = 0.0;
    std::vector<double> per_observation;
};

LogLikelihood log_likelihood(const ParameterVector& params, const Dataset& data, const ModelSpec& spec);

/// Sum of the log-likelihood terms for the listed rows only.
double log_likelihood_rows(const ParameterVector& params, const Dataset& data, const ModelSpec& spec,
                           std::span<const std::size_t> rows);

/// Log prior density in the natural (non-centered) parameterization.
/// Returns -inf when sigma_s <= 0 for M2.
double log_prior(const ParameterVector& params, const ModelSpec& spec);

/// Unnormalized log posterior: log_prior + log_likelihood.total.
double log_posterior(const ParameterVector& params, const Dataset& data, const ModelSpec& spec);

} // namespace practsig
