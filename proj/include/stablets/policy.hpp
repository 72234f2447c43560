#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stablets/bandit.hpp"
#include "stablets/rng.hpp"

namespace stablets {

/// Variance-inflation schedule gamma_T = coefficient * (log T)^exponent.
///
/// For this family the growth condition (gamma_T / log log T -> inf and
/// sqrt(log T) / gamma_T -> inf) holds exactly when 0 < exponent < 1/2.
class GammaSchedule {
public:
    GammaSchedule() = default;
    GammaSchedule(double coefficient, double exponent);

    double coefficient() const noexcept { return coefficient_; }
    double exponent() const noexcept { return exponent_; }
    bool satisfies_growth_condition() const noexcept { return exponent_ > 0.0 && exponent_ < 0.5; }

    friend bool operator==(const GammaSchedule&, const GammaSchedule&) = default;

private:
    double coefficient_ = 4.0;
    double exponent_ = 0.4;
};

/// gamma_T for horizon T; requires T >= 3.
double gamma_value(const GammaSchedule& schedule, std::uint64_t horizon);

struct GammaConditionRow {
    std::uint64_t horizon;
    double gamma;
    double growth_ratio;  ///< gamma_T / log log T
    double decay_ratio;   ///< sqrt(log T) / gamma_T
};

struct GammaConditionReport {
    std::vector<GammaConditionRow> rows;
    bool growth_ratio_increasing = false;
    bool decay_ratio_increasing = false;

    bool passed() const noexcept { return growth_ratio_increasing && decay_ratio_increasing; }
};

/// Evaluates both ratios at increasing horizons (each >= 16).
GammaConditionReport check_gamma_condition(const GammaSchedule& schedule, std::span<const std::uint64_t> horizons);

struct ThompsonSampling {
    friend bool operator==(const ThompsonSampling&, const ThompsonSampling&) = default;
};

struct StableThompsonSampling {
    GammaSchedule schedule;
    friend bool operator==(const StableThompsonSampling&, const StableThompsonSampling&) = default;
};

struct UpperConfidenceBound {
    friend bool operator==(const UpperConfidenceBound&, const UpperConfidenceBound&) = default;
};

using Policy = std::variant<ThompsonSampling, StableThompsonSampling, UpperConfidenceBound>;

/// Config name: "ts", "stable_ts" or "ucb".
std::string policy_name(const Policy& policy);

/// Posterior inflation used by the policy at horizon T: 1 for TS, gamma_T for
/// stable TS, nullopt for UCB.
std::optional<double> policy_gamma(const Policy& policy, std::uint64_t horizon);

/// Per-arm counts, running means and Welford sums of squared deviations.
class PolicyState {
public:
    explicit PolicyState(std::size_t num_arms);

    std::size_t num_arms() const noexcept { return counts_.size(); }
    std::uint64_t round() const noexcept { return round_; }
    std::uint64_t count(ArmId a) const { return counts_.at(a); }
    double mean(ArmId a) const { return means_.at(a); }
    double sum_sq_dev(ArmId a) const { return sum_sq_dev_.at(a); }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::span<const double> means() const noexcept { return means_; }

    /// Bessel-corrected sample variance; nullopt when the arm has fewer than 2 rewards.
    std::optional<double> sample_variance(ArmId a) const;

    bool initialized() const noexcept;

    /// Records one reward for `arm`: n += 1, mean = ((n - 1) * mean + reward) / n.
    /// Other arms are untouched.
    void update(ArmId arm, double reward);

    /// Builds a state directly from sufficient statistics (tests and bindings).
    static PolicyState from_statistics(std::vector<std::uint64_t> counts, std::vector<double> means,
                                       std::vector<double> sum_sq_dev = {});

private:
    std::vector<std::uint64_t> counts_;
    std::vector<double> means_;
    std::vector<double> sum_sq_dev_;
    std::uint64_t round_ = 0;
};

/// Thompson sampling: argmax of theta_a ~ N(mean_a, 1/n_a). Consumes exactly K posterior variates.
ArmId ts_select(const PolicyState& state, RngStream& rng);

/// Stable Thompson sampling: argmax of theta_a ~ N(mean_a, gamma/n_a). Consumes exactly K posterior variates.
ArmId stable_ts_select(const PolicyState& state, double gamma, RngStream& rng);

/// UCB index mean_a + sqrt(2 log T / n_a); ties go to the lowest index.
ArmId ucb_select(const PolicyState& state, double horizon);

}  // namespace stablets
