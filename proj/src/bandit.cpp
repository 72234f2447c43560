#include "stablets/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stablets/errors.hpp"

namespace stablets {

namespace {

void check_arm(std::size_t num_arms, ArmId a) {
    if (a >= num_arms) {
        throw DomainError("arm index " + std::to_string(a) + " out of range for " + std::to_string(num_arms) +
                          " arms");
    }
}

}  // namespace

BanditInstance::BanditInstance(std::vector<ArmSpec> arms) : arms_(std::move(arms)) {
    if (arms_.size() < 2) throw DomainError("a bandit instance needs at least 2 arms");
    for (std::size_t a = 0; a < arms_.size(); ++a) {
        const auto& spec = arms_[a];
        if (!std::isfinite(spec.mean)) throw DomainError("arm " + std::to_string(a + 1) + ": mean must be finite");
        if (!(spec.variance > 0.0) || !std::isfinite(spec.variance)) {
            throw DomainError("arm " + std::to_string(a + 1) + ": variance must be positive and finite");
        }
    }
    optimal_mean_ = std::max_element(arms_.begin(), arms_.end(), [](const ArmSpec& x, const ArmSpec& y) {
                        return x.mean < y.mean;
                    })->mean;
    gaps_.reserve(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a) {
        gaps_.push_back(optimal_mean_ - arms_[a].mean);
        if (arms_[a].mean == optimal_mean_) optimal_set_.push_back(a);
    }
}

const ArmSpec& BanditInstance::arm(ArmId a) const {
    check_arm(arms_.size(), a);
    return arms_[a];
}

double BanditInstance::gap(ArmId a) const {
    check_arm(arms_.size(), a);
    return gaps_[a];
}

std::vector<double> gaps(const BanditInstance& instance) { return instance.gaps(); }

std::vector<ArmId> optimal_set(const BanditInstance& instance) { return instance.optimal_set(); }

double sample_reward(const BanditInstance& instance, ArmId arm, RngStream& rng) {
    const auto& spec = instance.arm(arm);
    if (rng.purpose() != StreamPurpose::RewardNoise) throw DomainError("sample_reward needs a reward-noise stream");
    return spec.mean + std::sqrt(spec.variance) * rng.normal();
}

}  // namespace stablets
