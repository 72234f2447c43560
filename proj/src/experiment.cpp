#include "stablets/experiment.hpp"

namespace stablets {

unsigned resolve_workers(unsigned requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<ReplicationSummary> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto alphas = config.alpha_grid();
    std::vector<double> normalizers;
    for (const auto& n : pull_normalizers(config.instance, config.policy, config.horizon)) normalizers.push_back(n.value);

    EpisodeOptions options;
    options.record_steps = false;
    return parallel_replications(config.replications, config.workers, [&](std::uint64_t r) {
        const auto traj = run_episode(config.instance, config.policy, config.horizon, config.master_seed, r, options);
        return summarize_replication(traj, alphas, normalizers);
    });
}

std::vector<Trajectory> run_trajectories(const ExperimentConfig& config, const EpisodeOptions& options) {
    config.validate();
    return parallel_replications(config.replications, config.workers, [&](std::uint64_t r) {
        return run_episode(config.instance, config.policy, config.horizon, config.master_seed, r, options);
    });
}

}  // namespace stablets
