#pragma once

#include "practsig/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace practsig::synthetic {

struct DesignCell {
    int approach = 0;
    int experience = 0;
    int subjects = 0;
};

struct DesignSpec {
    std::vector<DesignCell> cells;
    int sessions_per_subject = 1;

    /// 2x2 design over 12 low- and 23 high-experience developers, approaches
    /// as balanced as possible within each level. `scale` multiplies every cell.
    static DesignSpec paper(int scale = 1);

    int n_subjects() const;
    void validate() const;
};

/// Posterior means reported for the zero-inflated multilevel model; mu_s = 0.
ParameterVector paper_means();

struct GeneratedData {
    Dataset data;
    std::vector<double> subject_intercepts; ///< empty for M1
};

/// Draws one intercept per subject from Normal(mu_s, sigma_s) (M2), then
/// every count from the model likelihood. Subject ids are assigned cell by
/// cell. Throws DomainError for an invalid truth.
GeneratedData generate_with_intercepts(const ParameterVector& truth, const DesignSpec& design,
                                       const ModelSpec& spec, std::uint64_t seed);

Dataset generate(const ParameterVector& truth, const DesignSpec& design, const ModelSpec& spec, std::uint64_t seed);

struct GroupStats {
    std::string group; ///< "low", "high", or "any"
    std::size_t n = 0;
    double median = 0.0;
    double mean = 0.0;
    std::optional<double> sd; ///< undefined for a single observation
    double min = 0.0;
    double max = 0.0;
};

/// Per experience level plus overall; empty levels are omitted.
std::vector<GroupStats> summary_stats(const Dataset& data);

} // namespace practsig::synthetic
