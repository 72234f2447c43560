#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stablets/bandit.hpp"
#include "stablets/episode.hpp"
#include "stablets/rng.hpp"

namespace stablets {

struct ReplicationSummary;

/// Two-arm probability that stable TS picks arm 1:
/// Phi(delta_hat * sqrt(n1 n2 / (t gamma))).
double selection_probability_closed_form(double delta_hat, std::uint64_t n1, std::uint64_t n2, std::uint64_t t,
                                         double gamma);

// ---------------------------------------------------------------------------
// Geometric waiting-time proxies for the suboptimal arm.

struct ProxyParams {
    double gap = 1.0;
    double gamma = 1.0;
    std::uint64_t j = 0;     ///< number of pulls so far
    double epsilon = 0.0;    ///< slack in (0, gap^2 / 2); only the bounds use it
};

/// exp(-j gap^2 / (2 gamma)).
double proxy_success_prob(const ProxyParams& params);

struct ProxyBounds {
    double plus;   ///< exp(-(j / gamma)(gap^2/2 + eps)), never above the proxy
    double minus;  ///< 3 exp(-(j / gamma)(gap^2/2 - eps)), never below the proxy (may exceed 1)
};

ProxyBounds proxy_success_prob_bounds(const ProxyParams& params);

/// inf{i >= 1 : xi_i < p} over uniforms from `rng`; geometric on {1, 2, ...} with mean 1/p.
std::uint64_t sample_proxy_waiting_time(double p, RngStream& rng);

struct CoupledWaitingTimes {
    std::uint64_t minus;  ///< driven by min(1, p-)
    std::uint64_t proxy;
    std::uint64_t plus;
};

/// The three proxies computed from one common uniform sequence, so minus <= proxy <= plus surely.
CoupledWaitingTimes sample_coupled_waiting_times(const ProxyParams& params, RngStream& rng);

// ---------------------------------------------------------------------------
// Trajectory-level quantities.

struct WaitingTimes {
    ArmId arm = 0;
    /// tau[0] is the round of the first pull (1 when the arm opens the episode);
    /// tau[j] for j >= 1 is the gap between pulls j and j + 1. Includes pulls in
    /// the continuation, if any.
    std::vector<std::uint64_t> tau;
};

WaitingTimes waiting_times(const Trajectory& trajectory, ArmId arm);

struct SandwichStatistic {
    double lower = 0.0;  ///< gamma log(sum_{j<n} tau_j) / n
    double point = 0.0;  ///< gamma log T / n
    double upper = 0.0;  ///< gamma log(sum_{j<=n} tau_j) / n; +inf when censored
    bool censored = false;
};

/// Requires a suboptimal arm with n >= 2 and a trajectory recorded with
/// `continue_until_pull == arm`.
SandwichStatistic sandwich_statistic(const Trajectory& trajectory, ArmId arm, double gamma);

/// sqrt((3 log log(2n) + 3 log log T) / n); requires n >= 2 and T >= 16.
double lil_envelope(std::uint64_t n, std::uint64_t horizon);

struct HighProbabilityEvents {
    bool e1 = false;  ///< n_{a,T} >= log T / (2 gap^2)
    bool e2 = false;  ///< n_{a,t} >= sqrt(log T) / (4 gap^2) on exp(sqrt(log T)) <= t <= next pull after T
    bool e3 = false;  ///< n_{a,t} <= (log T)^2 on the same window
    bool e4 = false;  ///< every arm's running mean stays inside the LIL envelope for all t
    bool cap_hit = false;  ///< continuation censored; e2/e3 evaluated on the capped window
};

/// E1-E3 concern `suboptimal_arm`; E4 covers all arms. Needs recorded steps and
/// a continuation for `suboptimal_arm`.
HighProbabilityEvents high_probability_events(const Trajectory& trajectory, ArmId suboptimal_arm);

/// E4 alone; usable on trajectories without a continuation and with equal means.
bool lil_event_holds(const Trajectory& trajectory);

// ---------------------------------------------------------------------------
// Algebraic inequalities.

struct MillsRatioBounds {
    double lower;       ///< z phi(z) / (1 + z^2)
    double exact_tail;  ///< 1 - Phi(z)
    double upper;       ///< phi(z) / z
};

MillsRatioBounds mills_ratio_bounds(double z);

struct LogSumExpBounds {
    double max;
    double lse;
    double upper;  ///< max + log n
};

LogSumExpBounds log_sum_exp_bounds(std::span<const double> values);

/// 8e4 gamma log(T gap^2 / gamma + 300) / gap^2 + 24 gamma / gap^2.
double expected_pulls_bound(std::uint64_t horizon, double gap, double gamma);

struct RegretEstimate {
    std::size_t replications = 0;
    double mean_regret = 0.0;  ///< mean of T mu* - sum of rewards
    double regret_standard_error = 0.0;
    double mean_pseudo_regret = 0.0;  ///< mean of sum_a gap_a n_{a,T}
    double pseudo_regret_standard_error = 0.0;
};

RegretEstimate empirical_regret(std::span<const Trajectory> trajectories, const BanditInstance& instance);
RegretEstimate empirical_regret(std::span<const ReplicationSummary> summaries);

}  // namespace stablets
