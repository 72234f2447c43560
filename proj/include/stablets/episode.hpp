#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stablets/bandit.hpp"
#include "stablets/policy.hpp"
#include "stablets/rng.hpp"

namespace stablets {

struct Step {
    std::uint64_t round;  ///< 1-based
    ArmId arm;
    double reward;
};

/// Rounds played after the horizon until the first further pull of `arm`.
struct Continuation {
    ArmId arm = 0;
    std::vector<Step> steps;  ///< the last step pulls `arm` unless censored
    bool censored = false;    ///< cap reached without a pull of `arm`
};

struct Trajectory {
    BanditInstance instance;
    Policy policy;
    std::uint64_t horizon = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t replication = 0;
    std::vector<Step> steps;  ///< empty when recording was disabled
    PolicyState final_state;  ///< state after round `horizon`
    std::optional<Continuation> continuation;
};

struct EpisodeOptions {
    bool record_steps = true;
    /// Keep playing past the horizon until this arm is pulled again.
    std::optional<ArmId> continue_until_pull;
    /// The extended trajectory stops at continuation_cap_factor * horizon rounds.
    std::uint64_t continuation_cap_factor = 100;
};

/// Pulls arms 1..K once each in order, then follows the policy for the
/// remaining rounds. gamma_T is fixed from the horizon for the whole episode,
/// including any continuation.
Trajectory run_episode(const BanditInstance& instance, const Policy& policy, std::uint64_t horizon,
                       StreamSet& streams, const EpisodeOptions& options = {});

/// Convenience overload that builds the streams for (master_seed, replication).
Trajectory run_episode(const BanditInstance& instance, const Policy& policy, std::uint64_t horizon,
                       std::uint64_t master_seed, std::uint64_t replication, const EpisodeOptions& options = {});

}  // namespace stablets
