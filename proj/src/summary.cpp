#include "stablets/summary.hpp"

#include "stablets/errors.hpp"

namespace stablets {

std::uint64_t ReplicationSummary::total_pulls() const noexcept {
    std::uint64_t total = 0;
    for (const auto& arm : arms) total += arm.n;
    return total;
}

ReplicationSummary summarize_replication(const Trajectory& trajectory, std::span<const double> alphas,
                                         std::span<const double> normalizers) {
    const auto& instance = trajectory.instance;
    const auto& state = trajectory.final_state;
    const auto k = instance.num_arms();
    if (normalizers.size() != k) throw DomainError("summarize_replication: one normalizer per arm required");

    ReplicationSummary out;
    out.replication = trajectory.replication;
    out.alphas.assign(alphas.begin(), alphas.end());
    out.arms.reserve(k);

    double reward_total = 0.0;
    for (ArmId a = 0; a < k; ++a) {
        const auto est = arm_estimate(state, a);
        ArmSummary arm{a, est.n, est.mean, est.sample_std, std::nullopt, {}, {}, 0.0};
        if (est.sample_std && *est.sample_std > 0.0) arm.standardized_error = standardized_error(est, instance.arm(a).mean);
        arm.intervals.reserve(alphas.size());
        for (double alpha : alphas) {
            if (est.sample_std) {
                const auto ci = confidence_interval(est, alpha);
                arm.covered.push_back(ci.contains(instance.arm(a).mean));
                arm.intervals.emplace_back(ci);
            } else {
                arm.covered.push_back(false);
                arm.intervals.emplace_back(std::nullopt);
            }
        }
        arm.normalized_pulls = static_cast<double>(est.n) / normalizers[a];
        reward_total += static_cast<double>(est.n) * est.mean;
        out.pseudo_regret += instance.gap(a) * static_cast<double>(est.n);
        out.arms.push_back(std::move(arm));
    }
    out.regret = static_cast<double>(trajectory.horizon) * instance.optimal_mean() - reward_total;
    return out;
}

}  // namespace stablets
