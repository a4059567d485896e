#include "practsig/sampler.hpp"

#include "practsig/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace practsig::mcmc {

double Target::block_log_density(std::size_t, std::span<const double> x) const
{
    return log_density(x);
}

double Target::transform(std::size_t block, std::span<const double>, double, std::span<double>) const
{
    throw ModelError("target defines no transform for block " + std::to_string(block));
}

std::vector<Block> Target::blocks() const
{
    Block all;
    all.indices.resize(dimension());
    std::iota(all.indices.begin(), all.indices.end(), std::size_t{0});
    return {all};
}

std::vector<double> Target::initial_point(Rng& rng) const
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> x(dimension());
    for (double& v : x)
        v = u(rng);
    return x;
}

std::vector<std::string> Target::names() const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dimension(); ++i)
        out.push_back("x" + std::to_string(i));
    return out;
}

void Target::constrain(std::span<const double> x, std::span<double> out) const
{
    std::copy(x.begin(), x.end(), out.begin());
}

void SamplerConfig::validate() const
{
    if (chains < 1 || warmup_iterations < 1 || retained_draws_per_chain < 1)
        throw ConfigError("sampler counts (chains, warmup, draws) must be positive");
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
        throw ConfigError("target acceptance must lie in (0, 1)");
}

double Draws::at(int chain, int draw, std::size_t param) const
{
    const std::size_t row = static_cast<std::size_t>(chain) * draws_per_chain + static_cast<std::size_t>(draw);
    return values[row * dimension() + param];
}

std::vector<double> Draws::column(std::size_t param) const
{
    std::vector<double> out;
    out.reserve(total_draws());
    for (std::size_t r = 0; r < total_draws(); ++r)
        out.push_back(values[r * dimension() + param]);
    return out;
}

std::vector<double> Draws::chain_column(int chain, std::size_t param) const
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(draws_per_chain));
    for (int d = 0; d < draws_per_chain; ++d)
        out.push_back(at(chain, d, param));
    return out;
}

std::size_t Draws::index_of(const std::string& name) const
{
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw InputError("draws have no parameter named '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

std::span<const double> Draws::row(std::size_t pooled_index) const
{
    return std::span<const double>(values).subspan(pooled_index * dimension(), dimension());
}

namespace {

/// Covariance estimation windows during warmup: a scale-only initial
/// buffer, doubling windows, and a scale-only terminal buffer.
struct AdaptationSchedule {
    int start = 0;
    std::vector<int> ends; ///< exclusive end iteration of each window
};

AdaptationSchedule adaptation_schedule(int warmup)
{
    AdaptationSchedule schedule;
    if (warmup < 20) {
        schedule.start = warmup;
        return schedule;
    }
    int init_buffer = 75;
    int term_buffer = 50;
    int base_window = 25;
    if (init_buffer + base_window + term_buffer > warmup) {
        init_buffer = static_cast<int>(0.15 * warmup);
        term_buffer = static_cast<int>(0.1 * warmup);
        base_window = warmup - init_buffer - term_buffer;
    }
    schedule.start = init_buffer;
    const int last = warmup - term_buffer;
    int start = init_buffer;
    int size = base_window;
    while (start < last) {
        int end = start + size;
        if (end + 2 * size > last)
            end = last;
        schedule.ends.push_back(end);
        start = end;
        size *= 2;
    }
    return schedule;
}

class BlockKernel {
public:
    BlockKernel(Block block, ProposalCovariance mode)
        : block_(std::move(block)), mode_(mode),
          dim_(block_.kind == BlockKind::random_walk ? block_.indices.size() : 1),
          chol_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_))),
          log_scale_(std::log(0.1 * 2.38 / std::sqrt(static_cast<double>(dim_))))
    {
        reset_window();
    }

    /// Returns the mean acceptance probability over this block's proposals.
    double step(const Target& target, std::size_t block_id, std::vector<double>& x, Rng& rng, bool adapt,
                double target_acceptance)
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const auto d = static_cast<Eigen::Index>(dim_);
        Eigen::VectorXd eps(d);
        std::vector<double> proposal = x;
        double current = evaluate(target, block_id, x);
        double accept_sum = 0.0;
        for (int rep = 0; rep < block_.repeats; ++rep) {
            for (Eigen::Index i = 0; i < d; ++i)
                eps(i) = normal(rng);
            const Eigen::VectorXd delta = std::exp(log_scale_) * (chol_ * eps);
            double log_jacobian = 0.0;
            if (block_.kind == BlockKind::rescale) {
                const double shift = delta(0);
                const double factor = std::exp(-shift);
                proposal[block_.indices[0]] = x[block_.indices[0]] + shift;
                for (std::size_t i = 1; i < block_.indices.size(); ++i)
                    proposal[block_.indices[i]] = x[block_.indices[i]] * factor;
                log_jacobian = -shift * static_cast<double>(block_.indices.size() - 1);
            } else if (block_.kind == BlockKind::transform) {
                log_jacobian = target.transform(block_id, x, delta(0), proposal);
            } else {
                for (Eigen::Index i = 0; i < d; ++i) {
                    const std::size_t j = block_.indices[static_cast<std::size_t>(i)];
                    proposal[j] = x[j] + delta(i);
                }
            }
            const double candidate = evaluate(target, block_id, proposal);
            double a = 0.0;
            if (candidate != -std::numeric_limits<double>::infinity())
                a = std::min(1.0, std::exp(candidate - current + log_jacobian));
            if (uniform(rng) < a) {
                for (std::size_t j : block_.indices)
                    x[j] = proposal[j];
                current = candidate;
            } else {
                for (std::size_t j : block_.indices)
                    proposal[j] = x[j];
            }
            accept_sum += a;
            if (adapt) {
                ++adapt_steps_;
                log_scale_ += std::pow(static_cast<double>(adapt_steps_), -0.6) * (a - target_acceptance);
                log_scale_ = std::clamp(log_scale_, -30.0, 10.0);
            }
        }
        return accept_sum / block_.repeats;
    }

    void record(std::span<const double> x)
    {
        if (block_.kind != BlockKind::random_walk)
            return;
        ++window_n_;
        const auto d = static_cast<Eigen::Index>(dim_);
        Eigen::VectorXd v(d);
        for (Eigen::Index i = 0; i < d; ++i)
            v(i) = x[block_.indices[static_cast<std::size_t>(i)]];
        const Eigen::VectorXd delta = v - window_mean_;
        window_mean_ += delta / static_cast<double>(window_n_);
        window_m2_ += delta * (v - window_mean_).transpose();
    }

    /// Closes a covariance window: regularized sample covariance becomes the
    /// proposal shape and the step scale restarts at 2.38 / sqrt(d).
    void close_window()
    {
        const auto d = static_cast<Eigen::Index>(dim_);
        if (window_n_ >= 3) {
            const double n = static_cast<double>(window_n_);
            Eigen::MatrixXd cov = window_m2_ / (n - 1.0);
            if (mode_ == ProposalCovariance::diagonal || dim_ == 1)
                cov = Eigen::MatrixXd(cov.diagonal().asDiagonal());
            cov = (n / (n + 5.0)) * cov +
                  1e-3 * (5.0 / (n + 5.0)) * Eigen::MatrixXd::Identity(d, d);
            Eigen::LLT<Eigen::MatrixXd> llt(cov);
            if (llt.info() == Eigen::Success) {
                chol_ = llt.matrixL();
                log_scale_ = std::log(2.38 / std::sqrt(static_cast<double>(dim_)));
                adapt_steps_ = 0;
            }
        }
        reset_window();
    }

private:
    static double evaluate(const Target& target, std::size_t block_id, std::span<const double> x)
    {
        const double v = target.block_log_density(block_id, x);
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "target returned a non-finite value (" << v << ") at point [";
            for (std::size_t i = 0; i < x.size(); ++i)
                msg << (i ? ", " : "") << x[i];
            msg << "]";
            throw ModelError(msg.str());
        }
        return v;
    }

    void reset_window()
    {
        const auto d = static_cast<Eigen::Index>(dim_);
        window_n_ = 0;
        window_mean_ = Eigen::VectorXd::Zero(d);
        window_m2_ = Eigen::MatrixXd::Zero(d, d);
    }

    Block block_;
    ProposalCovariance mode_;
    std::size_t dim_;
    Eigen::MatrixXd chol_;
    double log_scale_;
    long adapt_steps_ = 0;
    long window_n_ = 0;
    Eigen::VectorXd window_mean_;
    Eigen::MatrixXd window_m2_;
};

struct ChainResult {
    std::vector<double> values;
    double acceptance = 0.0;
};

ChainResult run_chain(const Target& target, const SamplerConfig& config, int chain)
{
    Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(chain));
    const std::size_t dim = target.dimension();

    std::vector<double> x;
    bool initialized = false;
    for (int attempt = 0; attempt < 50 && !initialized; ++attempt) {
        x = target.initial_point(rng);
        if (x.size() != dim)
            throw ModelError("initial point has the wrong dimension");
        const double lp = target.log_density(x);
        if (std::isnan(lp) || lp == std::numeric_limits<double>::infinity())
            throw ModelError("target returned a non-finite value at an initial point");
        initialized = std::isfinite(lp);
    }
    if (!initialized)
        throw InitializationError("chain " + std::to_string(chain) +
                                  ": log density is -inf at all 50 initialization attempts");

    std::vector<BlockKernel> kernels;
    for (auto& b : target.blocks())
        kernels.emplace_back(std::move(b), config.covariance);

    const AdaptationSchedule schedule = adaptation_schedule(config.warmup_iterations);
    std::size_t next_window = 0;

    ChainResult result;
    result.values.reserve(static_cast<std::size_t>(config.retained_draws_per_chain) * dim);
    std::vector<double> constrained(dim);
    double accept_total = 0.0;

    const int total = config.warmup_iterations + config.retained_draws_per_chain;
    for (int it = 0; it < total; ++it) {
        const bool warmup = it < config.warmup_iterations;
        double accept_iter = 0.0;
        for (std::size_t b = 0; b < kernels.size(); ++b)
            accept_iter += kernels[b].step(target, b, x, rng, warmup, config.target_acceptance);
        if (warmup) {
            if (it >= schedule.start && next_window < schedule.ends.size()) {
                for (auto& k : kernels)
                    k.record(x);
                if (it + 1 == schedule.ends[next_window]) {
                    for (auto& k : kernels)
                        k.close_window();
                    ++next_window;
                }
            }
            continue;
        }
        accept_total += accept_iter / static_cast<double>(kernels.size());
        target.constrain(x, constrained);
        result.values.insert(result.values.end(), constrained.begin(), constrained.end());
    }
    result.acceptance = accept_total / config.retained_draws_per_chain;
    return result;
}

class FunctionTarget final : public Target {
public:
    FunctionTarget(std::function<double(std::span<const double>)> f, std::size_t dim) : f_(std::move(f)), dim_(dim) {}
    std::size_t dimension() const override { return dim_; }
    double log_density(std::span<const double> x) const override { return f_(x); }

private:
    std::function<double(std::span<const double>)> f_;
    std::size_t dim_;
};

} // namespace

Draws run_mcmc(const Target& target, const SamplerConfig& config)
{
    config.validate();
    if (target.dimension() < 1)
        throw ConfigError("target dimension must be at least 1");

    std::vector<ChainResult> results(static_cast<std::size_t>(config.chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.chains));
    auto work = [&](int c) {
        try {
            results[static_cast<std::size_t>(c)] = run_chain(target, config, c);
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    };
    if (config.parallel && config.chains > 1 && std::thread::hardware_concurrency() > 1) {
        std::vector<std::jthread> threads;
        for (int c = 0; c < config.chains; ++c)
            threads.emplace_back(work, c);
    } else {
        for (int c = 0; c < config.chains; ++c)
            work(c);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    Draws draws;
    draws.chains = config.chains;
    draws.draws_per_chain = config.retained_draws_per_chain;
    draws.names = target.names();
    for (auto& r : results) {
        draws.values.insert(draws.values.end(), r.values.begin(), r.values.end());
        draws.acceptance_rate.push_back(r.acceptance);
    }
    for (double v : draws.values)
        if (!std::isfinite(v))
            throw ModelError("sampler produced a non-finite draw");
    return draws;
}

Draws run_mcmc(std::function<double(std::span<const double>)> log_density, std::size_t dim,
               const SamplerConfig& config)
{
    const FunctionTarget target(std::move(log_density), dim);
    return run_mcmc(target, config);
}

} // namespace practsig::mcmc
