#include "stablets/episode.hpp"

#include <cmath>
#include <string>

#include "stablets/errors.hpp"

namespace stablets {

namespace {

// Selection closures keep the per-round loop free of variant dispatch.
struct TsRule {
    ArmId operator()(const PolicyState& state, StreamSet& streams) const { return ts_select(state, streams.posterior); }
};

struct StableTsRule {
    double gamma;
    ArmId operator()(const PolicyState& state, StreamSet& streams) const {
        return stable_ts_select(state, gamma, streams.posterior);
    }
};

struct UcbRule {
    double horizon;
    ArmId operator()(const PolicyState& state, StreamSet&) const { return ucb_select(state, horizon); }
};

template <class Rule>
void drive(const BanditInstance& instance, std::uint64_t horizon, StreamSet& streams, const EpisodeOptions& options,
           const Rule& rule, Trajectory& out) {
    const auto k = instance.num_arms();
    PolicyState state(k);
    if (options.record_steps) out.steps.reserve(horizon);

    auto play = [&](ArmId arm, std::vector<Step>* sink) {
        const double reward = sample_reward(instance, arm, streams.reward);
        state.update(arm, reward);
        if (sink != nullptr) sink->push_back(Step{state.round(), arm, reward});
        return arm;
    };

    std::vector<Step>* sink = options.record_steps ? &out.steps : nullptr;
    for (ArmId a = 0; a < k; ++a) play(a, sink);
    for (std::uint64_t t = k + 1; t <= horizon; ++t) play(rule(state, streams), sink);
    out.final_state = state;

    if (options.continue_until_pull) {
        Continuation extra;
        extra.arm = *options.continue_until_pull;
        const std::uint64_t cap = options.continuation_cap_factor * horizon;
        extra.censored = true;
        for (std::uint64_t t = horizon + 1; t <= cap; ++t) {
            if (play(rule(state, streams), &extra.steps) == extra.arm) {
                extra.censored = false;
                break;
            }
        }
        out.continuation = std::move(extra);
    }
}

}  // namespace

Trajectory run_episode(const BanditInstance& instance, const Policy& policy, std::uint64_t horizon,
                       StreamSet& streams, const EpisodeOptions& options) {
    const auto k = instance.num_arms();
    if (horizon < k) {
        throw DomainError("run_episode: T < K (horizon " + std::to_string(horizon) + ", " + std::to_string(k) +
                          " arms)");
    }
    if (options.continue_until_pull && *options.continue_until_pull >= k) {
        throw DomainError("run_episode: continuation arm out of range");
    }

    Trajectory out{instance, policy, horizon, streams.reward.master_seed(), streams.reward.replication(), {},
                   PolicyState(k), std::nullopt};

    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ThompsonSampling>) {
                drive(instance, horizon, streams, options, TsRule{}, out);
            } else if constexpr (std::is_same_v<P, StableThompsonSampling>) {
                // T = K leaves no posterior decisions, so gamma_T is not needed (and log T may be < 1)
                const bool decides = horizon > k || options.continue_until_pull.has_value();
                const double gamma = decides ? gamma_value(p.schedule, horizon) : 1.0;
                drive(instance, horizon, streams, options, StableTsRule{gamma}, out);
            } else {
                drive(instance, horizon, streams, options, UcbRule{static_cast<double>(horizon)}, out);
            }
        },
        policy);
    return out;
}

Trajectory run_episode(const BanditInstance& instance, const Policy& policy, std::uint64_t horizon,
                       std::uint64_t master_seed, std::uint64_t replication, const EpisodeOptions& options) {
    auto streams = StreamSet::for_replication(master_seed, replication);
    return run_episode(instance, policy, horizon, streams, options);
}

}  // namespace stablets
