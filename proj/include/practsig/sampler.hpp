#pragma once

#include "practsig/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace practsig::mcmc {

enum class BlockKind {
    random_walk, ///< Gaussian step on every listed coordinate
    /// indices[0] is a log scale shifted by e; the remaining coordinates
    /// are multiplied by exp(-e), keeping exp(x0) * x_i fixed.
    rescale,
    /// One-parameter move supplied by Target::transform; indices lists
    /// every coordinate the move may change.
    transform,
};

/// A group of coordinates updated jointly by one proposal.
struct Block {
    std::vector<std::size_t> indices;
    int repeats = 1; ///< proposals per sweep
    BlockKind kind = BlockKind::random_walk;
};

/// Unnormalized log density over an unconstrained real vector.
///
/// Returning -inf rejects a point. NaN or +inf at a finite point is a model
/// error. Implementations must be safe to call concurrently.
class Target {
public:
    virtual ~Target() = default;

    virtual std::size_t dimension() const = 0;
    virtual double log_density(std::span<const double> x) const = 0;

    /// Log density up to additive terms that do not depend on the
    /// coordinates of blocks()[block]. Defaults to the full density.
    virtual double block_log_density(std::size_t block, std::span<const double> x) const;

    /// Default: a single block holding every coordinate.
    virtual std::vector<Block> blocks() const;

    /// Applies the one-parameter move of a transform block: writes the image
    /// of `x` under step `e` into `out` and returns log |Jacobian|. Step -e
    /// must undo step e. Default: throws ModelError.
    virtual double transform(std::size_t block, std::span<const double> x, double e, std::span<double> out) const;

    /// Default: every coordinate ~ Uniform(-2, 2).
    virtual std::vector<double> initial_point(Rng& rng) const;

    /// Names of the output columns; default x0, x1, ...
    virtual std::vector<std::string> names() const;

    /// Maps an unconstrained point to the reported parameterization.
    /// Default: identity.
    virtual void constrain(std::span<const double> x, std::span<double> out) const;
};

enum class ProposalCovariance { diagonal, dense };

struct SamplerConfig {
    int chains = 4;
    int warmup_iterations = 1000;
    int retained_draws_per_chain = 1000;
    std::uint64_t seed = 0;
    double target_acceptance = 0.30;
    ProposalCovariance covariance = ProposalCovariance::dense;
    bool parallel = true;

    void validate() const;
};

/// Retained draws, stored chain-major: values[(chain * draws + draw) * dim + param].
struct Draws {
    int chains = 0;
    int draws_per_chain = 0;
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> acceptance_rate; ///< per chain, averaged over blocks

    std::size_t dimension() const noexcept { return names.size(); }
    std::size_t total_draws() const noexcept { return static_cast<std::size_t>(chains) * draws_per_chain; }
    double at(int chain, int draw, std::size_t param) const;
    /// Pooled draws of one parameter, chain-major.
    std::vector<double> column(std::size_t param) const;
    std::vector<double> chain_column(int chain, std::size_t param) const;
    /// Index of the named parameter; throws InputError if absent.
    std::size_t index_of(const std::string& name) const;
    /// One retained draw as a row vector.
    std::span<const double> row(std::size_t pooled_index) const;
};

Draws run_mcmc(const Target& target, const SamplerConfig& config);

/// Convenience overload: single-block sampling of a plain function.
Draws run_mcmc(std::function<double(std::span<const double>)> log_density, std::size_t dim,
               const SamplerConfig& config);

} // namespace practsig::mcmc
