#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace practsig::cpt {

/// Money figures for the value of a testing session.
struct CostProfile {
    double savings_per_fault = 150.0; ///< S
    double hourly_low = 100.0;        ///< C- (low experience)
    double hourly_high = 200.0;       ///< C+ (high experience)
    double hourly_mixed = 134.38;     ///< C-bar (pooled); explicit, never derived
    double session_hours = 3.0;       ///< h

    void validate() const;
};

enum class CostSelector { low, high, mixed };

double hourly_cost(const CostProfile& profile, CostSelector selector);
std::string to_string(CostSelector selector);
CostSelector parse_cost_selector(const std::string& text);

enum class WeightingMode {
    cumulative, ///< rank-dependent decision weights
    pointwise,  ///< w(P(x)) applied to each outcome separately
};

std::string to_string(WeightingMode mode);
WeightingMode parse_weighting_mode(const std::string& text);

struct WeightingParams {
    double gamma_gain = 0.61;
    double gamma_loss = 0.69;
    WeightingMode mode = WeightingMode::cumulative;
    /// Optional power value function x^a for gains, -lambda (-x)^a for
    /// losses. Off by default: outcomes are valued in raw money.
    bool power_value = false;
    double value_exponent = 0.88;
    double loss_aversion = 2.25;

    void validate() const;
};

struct Outcome {
    double value = 0.0;
    double probability = 0.0;
};

struct Prospect {
    std::vector<Outcome> outcomes;
    double reference = 0.0;

    /// Throws InputError unless probabilities are nonnegative and sum to
    /// 1 within 1e-9 and every value is finite.
    void validate() const;
    /// Mean of value - reference.
    double expectation() const;
};

/// Tversky-Kahneman weighting function p^g / (p^g + (1-p)^g)^(1/g).
double tk_weight(double p, double gamma);

/// Net money of a session that finds `faults` faults: S * x - C * h.
double value(std::int64_t faults, double savings_per_fault, double hourly_cost, double hours);

/// Decision weight per outcome, in input order.
std::vector<double> decision_weights(const Prospect& prospect, const WeightingParams& params);

/// Sum of decision weight times (transformed) value relative to the reference.
double expected_utility(const Prospect& prospect, const WeightingParams& params);

struct TailEntry {
    double probability = 0.0;
    double value = 0.0; ///< probability-weighted mean value inside the band
};

/// Splits the sorted outcome distribution into lower / central / upper
/// probability bands and reports the mean value in each. Outcomes that
/// straddle a band boundary are apportioned fractionally.
std::array<TailEntry, 3> tail_breakdown(const Prospect& prospect,
                                        const std::array<double, 3>& split = {0.03, 0.94, 0.03});

} // namespace practsig::cpt
