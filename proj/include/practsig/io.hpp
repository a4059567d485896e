#pragma once

#include "practsig/csv.hpp"
#include "practsig/model.hpp"
#include "practsig/model_compare.hpp"
#include "practsig/posterior.hpp"
#include "practsig/sampler.hpp"
#include "practsig/scenarios.hpp"
#include "practsig/synthetic.hpp"

#include <filesystem>
#include <optional>

namespace practsig::io {

/// Header `subject,approach,experience,faults`. approach accepts
/// 0/1/exploratory/testcase, experience 0/1/low/high.
Dataset parse_dataset(const csv::Table& table);
Dataset read_dataset(const std::filesystem::path& path);
csv::Table dataset_table(const Dataset& data);
void write_dataset(const std::filesystem::path& path, const Dataset& data);

/// Header `chain,iteration,<names...>`; 17 significant digits.
csv::Table draws_table(const mcmc::Draws& draws);
mcmc::Draws parse_draws(const csv::Table& table);

/// Sidecar paths next to a draws file: `<stem>.meta.json` and
/// `<stem>.diagnostics.csv`.
std::filesystem::path meta_path(const std::filesystem::path& draws_path);
std::filesystem::path diagnostics_path(const std::filesystem::path& draws_path);

/// Writes the draws file and both sidecars.
void save_posterior(const std::filesystem::path& draws_path, const Posterior& post,
                    const mcmc::SamplerConfig& config);

/// Reads a draws file and its metadata sidecar. Without a sidecar the model
/// is inferred from the column names and the data fingerprint is unknown.
Posterior load_posterior(const std::filesystem::path& draws_path);

csv::Table diagnostics_table(const std::vector<mcmc::ParameterDiagnostics>& diagnostics);
csv::Table summary_table(const std::vector<SummaryRow>& rows);
csv::Table histogram_table(const MarginalDensity& density);
csv::Table predictive_table(const PredictiveDistribution& pd);
csv::Table comparison_table(const ComparisonResult& result);
csv::Table report_table(const scenarios::UtilityReport& report);
csv::Table sweep_table(const scenarios::SweepTable& table);
csv::Table summary_stats_table(const std::vector<synthetic::GroupStats>& stats);

} // namespace practsig::io
