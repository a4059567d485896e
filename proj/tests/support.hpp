#pragma once

#include "practsig/model.hpp"
#include "practsig/posterior.hpp"
#include "practsig/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing {

/// Same 64-bit LCG as tests/oracle/generate.py.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    double uniform()
    {
        state_ = 6364136223846793005ULL * state_ + 1442695040888963407ULL;
        return (static_cast<double>(state_ >> 11) + 0.5) / 9007199254740992.0;
    }

private:
    std::uint64_t state_;
};

/// A posterior whose every draw equals `params`.
inline practsig::Posterior degenerate_posterior(const practsig::ParameterVector& params,
                                                const practsig::ModelSpec& spec, int n_subjects, int chains = 4,
                                                int draws = 1000)
{
    practsig::mcmc::Draws d;
    d.chains = chains;
    d.draws_per_chain = draws;
    d.names = practsig::parameter_names(spec, n_subjects);
    auto p = params;
    if (spec.kind == practsig::ModelKind::M2)
        p.z_subjects.resize(static_cast<std::size_t>(n_subjects), 0.0);
    const auto row = practsig::pack(p, spec);
    for (int i = 0; i < chains * draws; ++i)
        d.values.insert(d.values.end(), row.begin(), row.end());
    d.acceptance_rate.assign(static_cast<std::size_t>(chains), 0.0);
    return practsig::Posterior::from_draws(std::move(d), spec, {0, n_subjects, 0}, 0);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("practsig_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace testing
