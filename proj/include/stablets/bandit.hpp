#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stablets/rng.hpp"

namespace stablets {

/// Arm index, 0-based. Files and CLI output use 1-based ids.
using ArmId = std::size_t;

struct ArmSpec {
    double mean = 0.0;
    double variance = 1.0;

    friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

/// Gaussian K-armed bandit. Immutable after construction.
///
/// Optimality is decided by exact equality with the largest mean: means are
/// configured inputs, not estimates.
class BanditInstance {
public:
    explicit BanditInstance(std::vector<ArmSpec> arms);

    std::size_t num_arms() const noexcept { return arms_.size(); }
    std::span<const ArmSpec> arms() const noexcept { return arms_; }
    const ArmSpec& arm(ArmId a) const;

    double optimal_mean() const noexcept { return optimal_mean_; }
    double gap(ArmId a) const;
    const std::vector<double>& gaps() const noexcept { return gaps_; }
    const std::vector<ArmId>& optimal_set() const noexcept { return optimal_set_; }
    bool is_optimal(ArmId a) const { return gap(a) == 0.0; }

    friend bool operator==(const BanditInstance&, const BanditInstance&) = default;

private:
    std::vector<ArmSpec> arms_;
    double optimal_mean_;
    std::vector<double> gaps_;
    std::vector<ArmId> optimal_set_;
};

std::vector<double> gaps(const BanditInstance& instance);
std::vector<ArmId> optimal_set(const BanditInstance& instance);

/// One draw from N(mean_a, variance_a); `rng` must be a reward-noise stream.
double sample_reward(const BanditInstance& instance, ArmId arm, RngStream& rng);

}  // namespace stablets
