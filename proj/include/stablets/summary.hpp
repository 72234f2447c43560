#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stablets/episode.hpp"
#include "stablets/inference.hpp"

namespace stablets {

struct ArmSummary {
    ArmId arm = 0;
    std::uint64_t n = 0;
    double mean = 0.0;
    std::optional<double> sample_std;
    std::optional<double> standardized_error;  ///< undefined when n < 2 or sigma_hat == 0
    std::vector<std::optional<ConfidenceInterval>> intervals;  ///< one per alpha, undefined when n < 2
    std::vector<bool> covered;                                 ///< interval contains the true mean
    double normalized_pulls = 0.0;                             ///< n / pull normalizer
};

/// Per-replication record; everything downstream aggregates from these.
struct ReplicationSummary {
    std::uint64_t replication = 0;
    std::vector<double> alphas;
    std::vector<ArmSummary> arms;
    double regret = 0.0;         ///< T mu* - sum of rewards
    double pseudo_regret = 0.0;  ///< sum over arms of gap * n

    std::uint64_t total_pulls() const noexcept;
};

/// `normalizers` has one positive entry per arm.
ReplicationSummary summarize_replication(const Trajectory& trajectory, std::span<const double> alphas,
                                         std::span<const double> normalizers);

}  // namespace stablets
