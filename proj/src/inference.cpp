#include "stablets/inference.hpp"

#include <cmath>
#include <string>

#include "stablets/errors.hpp"
#include "stablets/summary.hpp"

namespace stablets {

ArmEstimate arm_estimate(const PolicyState& state, ArmId arm) {
    ArmEstimate est{arm, state.count(arm), state.mean(arm), std::nullopt};
    if (auto var = state.sample_variance(arm)) est.sample_std = std::sqrt(*var);
    return est;
}

std::vector<ArmEstimate> arm_estimates(const Trajectory& trajectory) {
    std::vector<ArmEstimate> out;
    out.reserve(trajectory.final_state.num_arms());
    for (ArmId a = 0; a < trajectory.final_state.num_arms(); ++a) out.push_back(arm_estimate(trajectory.final_state, a));
    return out;
}

ConfidenceInterval confidence_interval(const ArmEstimate& estimate, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("confidence_interval: alpha must lie in (0, 1)");
    if (estimate.n < 2 || !estimate.sample_std) {
        throw InsufficientDataError("confidence_interval: arm " + std::to_string(estimate.arm + 1) +
                                    " has fewer than 2 rewards");
    }
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double half = z * *estimate.sample_std / std::sqrt(static_cast<double>(estimate.n));
    return ConfidenceInterval{estimate.arm, 1.0 - alpha, estimate.mean - half, estimate.mean + half};
}

double standardized_error(const ArmEstimate& estimate, double true_mean) {
    if (estimate.n < 2 || !estimate.sample_std) {
        throw InsufficientDataError("standardized_error: fewer than 2 rewards");
    }
    if (*estimate.sample_std == 0.0) throw DegenerateError("standardized_error: zero sample standard deviation");
    return std::sqrt(static_cast<double>(estimate.n)) * (estimate.mean - true_mean) / *estimate.sample_std;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> alphas;
    alphas.reserve(25);
    // levels 75..99 percent; alpha = (100 - level) / 100 keeps the values exact decimals
    for (int level = 75; level <= 99; ++level) alphas.push_back(static_cast<double>(100 - level) / 100.0);
    return alphas;
}

std::vector<CoverageRow> coverage_curve(std::span<const ReplicationSummary> summaries, const BanditInstance& instance,
                                        std::span<const double> alpha_grid) {
    if (alpha_grid.empty()) throw DomainError("coverage_curve: empty alpha grid");
    if (summaries.empty()) throw DomainError("coverage_curve: no replications");

    const auto k = instance.num_arms();
    std::vector<std::size_t> covered(k * alpha_grid.size(), 0);
    for (const auto& summary : summaries) {
        if (summary.arms.size() != k) throw DomainError("coverage_curve: summary arm count differs from instance");
        for (std::size_t g = 0; g < alpha_grid.size(); ++g) {
            std::size_t slot = summary.alphas.size();
            for (std::size_t i = 0; i < summary.alphas.size(); ++i) {
                if (summary.alphas[i] == alpha_grid[g]) {
                    slot = i;
                    break;
                }
            }
            if (slot == summary.alphas.size()) {
                throw DomainError("coverage_curve: replication " + std::to_string(summary.replication) +
                                  " has no interval for alpha " + std::to_string(alpha_grid[g]));
            }
            for (ArmId a = 0; a < k; ++a) {
                const auto& ci = summary.arms[a].intervals[slot];
                if (ci && ci->contains(instance.arm(a).mean)) ++covered[a * alpha_grid.size() + g];
            }
        }
    }

    const double r = static_cast<double>(summaries.size());
    std::vector<CoverageRow> rows;
    rows.reserve(covered.size());
    for (ArmId a = 0; a < k; ++a) {
        for (std::size_t g = 0; g < alpha_grid.size(); ++g) {
            const double p = static_cast<double>(covered[a * alpha_grid.size() + g]) / r;
            rows.push_back(CoverageRow{a, 1.0 - alpha_grid[g], p, std::sqrt(p * (1.0 - p) / r), summaries.size()});
        }
    }
    return rows;
}

}  // namespace stablets
