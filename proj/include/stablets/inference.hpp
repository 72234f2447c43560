#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stablets/bandit.hpp"
#include "stablets/episode.hpp"
#include "stablets/normal.hpp"

namespace stablets {

struct ArmEstimate {
    ArmId arm = 0;
    std::uint64_t n = 0;
    double mean = 0.0;
    std::optional<double> sample_std;  ///< Bessel-corrected; defined iff n >= 2
};

/// One estimate per arm from the trajectory's final state.
std::vector<ArmEstimate> arm_estimates(const Trajectory& trajectory);

ArmEstimate arm_estimate(const PolicyState& state, ArmId arm);

/// Symmetric normal interval mean +- z_{1-alpha/2} * sigma_hat / sqrt(n).
struct ConfidenceInterval {
    ArmId arm = 0;
    double level = 0.0;  ///< 1 - alpha
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double value) const noexcept { return lower <= value && value <= upper; }
    double half_width() const noexcept { return 0.5 * (upper - lower); }
};

/// Throws InsufficientDataError when n < 2, DomainError unless 0 < alpha < 1.
ConfidenceInterval confidence_interval(const ArmEstimate& estimate, double alpha);

/// sqrt(n) * (mean - true_mean) / sigma_hat. Throws DegenerateError when sigma_hat is 0.
double standardized_error(const ArmEstimate& estimate, double true_mean);

/// 25 alphas matching nominal levels 0.75, 0.76, ..., 0.99.
std::vector<double> default_alpha_grid();

struct CoverageRow {
    ArmId arm = 0;
    double level = 0.0;
    double coverage = 0.0;
    double standard_error = 0.0;  ///< sqrt(p (1 - p) / R)
    std::size_t replications = 0;
};

struct ReplicationSummary;

/// Empirical coverage per arm and level. Rows are ordered by arm, then by the
/// order of `alpha_grid`. A replication whose interval is undefined for an arm
/// (fewer than two pulls) counts as not covering.
std::vector<CoverageRow> coverage_curve(std::span<const ReplicationSummary> summaries, const BanditInstance& instance,
                                        std::span<const double> alpha_grid);

}  // namespace stablets
