#include "stablets/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stablets/errors.hpp"
#include "stablets/normal.hpp"
#include "stablets/summary.hpp"

namespace stablets {

double selection_probability_closed_form(double delta_hat, std::uint64_t n1, std::uint64_t n2, std::uint64_t t,
                                         double gamma) {
    if (n1 < 1 || n2 < 1) throw DomainError("selection_probability_closed_form: counts must be at least 1");
    if (t < n1 + n2) throw DomainError("selection_probability_closed_form: t must be at least n1 + n2");
    if (!(gamma > 0.0)) throw DomainError("selection_probability_closed_form: gamma must be positive");
    if (!std::isfinite(delta_hat)) throw DomainError("selection_probability_closed_form: delta_hat must be finite");
    const double scale =
        std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) / (static_cast<double>(t) * gamma));
    return normal_cdf(delta_hat * scale);
}

namespace {

void check_proxy(const ProxyParams& p) {
    if (!(p.gap > 0.0)) throw DomainError("proxy: gap must be positive");
    if (!(p.gamma > 0.0)) throw DomainError("proxy: gamma must be positive");
}

void check_epsilon(const ProxyParams& p) {
    if (!(p.epsilon > 0.0 && p.epsilon < p.gap * p.gap / 2.0)) {
        throw DomainError("proxy bounds: epsilon must lie in (0, gap^2 / 2)");
    }
}

std::uint64_t first_hit(double p, RngStream& rng) {
    std::uint64_t i = 1;
    while (!(rng.uniform() < p)) ++i;
    return i;
}

}  // namespace

double proxy_success_prob(const ProxyParams& params) {
    check_proxy(params);
    return std::exp(-static_cast<double>(params.j) * params.gap * params.gap / (2.0 * params.gamma));
}

ProxyBounds proxy_success_prob_bounds(const ProxyParams& params) {
    check_proxy(params);
    check_epsilon(params);
    const double scaled = static_cast<double>(params.j) / params.gamma;
    const double half_sq = params.gap * params.gap / 2.0;
    return {std::exp(-scaled * (half_sq + params.epsilon)), 3.0 * std::exp(-scaled * (half_sq - params.epsilon))};
}

std::uint64_t sample_proxy_waiting_time(double p, RngStream& rng) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("sample_proxy_waiting_time: p must lie in (0, 1]");
    return first_hit(p, rng);
}

CoupledWaitingTimes sample_coupled_waiting_times(const ProxyParams& params, RngStream& rng) {
    const double proxy = proxy_success_prob(params);
    const auto bounds = proxy_success_prob_bounds(params);
    const double p_minus = std::min(1.0, bounds.minus);
    CoupledWaitingTimes out{0, 0, 0};
    // the thresholds are nested (plus <= proxy <= p_minus), so one pass over the xi sequence records all three
    for (std::uint64_t i = 1; out.plus == 0; ++i) {
        const double xi = rng.uniform();
        if (out.minus == 0 && xi < p_minus) out.minus = i;
        if (out.proxy == 0 && xi < proxy) out.proxy = i;
        if (xi < bounds.plus) out.plus = i;
    }
    return out;
}

namespace {

// pull rounds of `arm` in the recorded steps followed by the continuation
std::vector<std::uint64_t> pull_rounds(const Trajectory& trajectory, ArmId arm) {
    std::vector<std::uint64_t> rounds;
    for (const auto& s : trajectory.steps) {
        if (s.arm == arm) rounds.push_back(s.round);
    }
    if (trajectory.continuation) {
        for (const auto& s : trajectory.continuation->steps) {
            if (s.arm == arm) rounds.push_back(s.round);
        }
    }
    return rounds;
}

void require_steps(const Trajectory& trajectory, const char* who) {
    if (trajectory.steps.size() != trajectory.horizon) {
        throw DomainError(std::string(who) + ": trajectory was recorded without steps");
    }
}

}  // namespace

WaitingTimes waiting_times(const Trajectory& trajectory, ArmId arm) {
    require_steps(trajectory, "waiting_times");
    if (arm >= trajectory.instance.num_arms()) throw DomainError("waiting_times: arm out of range");
    const auto rounds = pull_rounds(trajectory, arm);
    if (rounds.size() < 2) throw InsufficientDataError("waiting_times: arm pulled fewer than 2 times");
    WaitingTimes out{arm, {}};
    out.tau.reserve(rounds.size());
    out.tau.push_back(rounds.front());
    for (std::size_t k = 1; k < rounds.size(); ++k) out.tau.push_back(rounds[k] - rounds[k - 1]);
    return out;
}

SandwichStatistic sandwich_statistic(const Trajectory& trajectory, ArmId arm, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("sandwich_statistic: gamma must be positive");
    if (trajectory.instance.gap(arm) <= 0.0) throw DomainError("sandwich_statistic: arm must be suboptimal");
    if (!trajectory.continuation || trajectory.continuation->arm != arm) {
        throw DomainError("sandwich_statistic: trajectory needs a continuation for this arm");
    }
    const auto n = trajectory.final_state.count(arm);
    if (n < 2) throw InsufficientDataError("sandwich_statistic: arm pulled fewer than 2 times");

    const auto wt = waiting_times(trajectory, arm);
    std::uint64_t head = 0;
    for (std::uint64_t j = 0; j < n; ++j) head += wt.tau[j];

    const double nd = static_cast<double>(n);
    SandwichStatistic out;
    out.lower = gamma * std::log(static_cast<double>(head)) / nd;
    out.point = gamma * std::log(static_cast<double>(trajectory.horizon)) / nd;
    out.censored = trajectory.continuation->censored;
    out.upper = out.censored ? std::numeric_limits<double>::infinity()
                             : gamma * std::log(static_cast<double>(head + wt.tau[n])) / nd;
    if (!(out.lower <= out.point && out.point <= out.upper)) {
        throw std::logic_error("sandwich_statistic: ordering violated");
    }
    return out;
}

namespace {

double envelope_radicand(std::uint64_t n, double log_log_t) {
    return (3.0 * std::log(std::log(2.0 * static_cast<double>(n))) + 3.0 * log_log_t) / static_cast<double>(n);
}

}  // namespace

double lil_envelope(std::uint64_t n, std::uint64_t horizon) {
    if (n < 2) throw DomainError("lil_envelope: n must be at least 2");
    if (horizon < 16) throw DomainError("lil_envelope: horizon must be at least 16");
    return std::sqrt(envelope_radicand(n, std::log(std::log(static_cast<double>(horizon)))));
}

namespace {

// E4 walked over every recorded reward. At n = 1 the log log(2) term is negative
// but the radicand stays positive for T >= 16, so the event is checked from the first pull.
bool lil_event_over(const Trajectory& trajectory) {
    if (trajectory.horizon < 16) throw DomainError("LIL event: horizon must be at least 16");
    const auto& instance = trajectory.instance;
    const double log_log_t = std::log(std::log(static_cast<double>(trajectory.horizon)));
    PolicyState state(instance.num_arms());
    auto check = [&](const Step& s) {
        state.update(s.arm, s.reward);
        const auto n = state.count(s.arm);
        return std::fabs(state.mean(s.arm) - instance.arm(s.arm).mean) <= std::sqrt(envelope_radicand(n, log_log_t));
    };
    for (const auto& s : trajectory.steps) {
        if (!check(s)) return false;
    }
    if (trajectory.continuation) {
        for (const auto& s : trajectory.continuation->steps) {
            if (!check(s)) return false;
        }
    }
    return true;
}

}  // namespace

bool lil_event_holds(const Trajectory& trajectory) {
    require_steps(trajectory, "lil_event_holds");
    return lil_event_over(trajectory);
}

HighProbabilityEvents high_probability_events(const Trajectory& trajectory, ArmId suboptimal_arm) {
    require_steps(trajectory, "high_probability_events");
    const double gap = trajectory.instance.gap(suboptimal_arm);
    if (gap <= 0.0) throw DomainError("high_probability_events: arm must be suboptimal");
    if (!trajectory.continuation || trajectory.continuation->arm != suboptimal_arm) {
        throw DomainError("high_probability_events: trajectory needs a continuation for this arm");
    }
    const double log_t = std::log(static_cast<double>(trajectory.horizon));
    const double window_start = std::exp(std::sqrt(log_t));
    const double floor_e2 = std::sqrt(log_t) / (4.0 * gap * gap);
    const double ceil_e3 = log_t * log_t;

    HighProbabilityEvents ev;
    ev.cap_hit = trajectory.continuation->censored;
    ev.e1 = static_cast<double>(trajectory.final_state.count(suboptimal_arm)) >= log_t / (2.0 * gap * gap);
    ev.e2 = true;
    ev.e3 = true;
    std::uint64_t n = 0;
    auto visit = [&](const Step& s) {
        if (s.arm == suboptimal_arm) ++n;
        if (static_cast<double>(s.round) >= window_start) {
            const double nd = static_cast<double>(n);
            ev.e2 = ev.e2 && nd >= floor_e2;
            ev.e3 = ev.e3 && nd <= ceil_e3;
        }
    };
    for (const auto& s : trajectory.steps) visit(s);
    for (const auto& s : trajectory.continuation->steps) visit(s);
    ev.e4 = lil_event_over(trajectory);
    return ev;
}

MillsRatioBounds mills_ratio_bounds(double z) {
    if (!(z > 0.0)) throw DomainError("mills_ratio_bounds: z must be positive");
    const double phi = normal_pdf(z);
    return {z * phi / (1.0 + z * z), normal_upper_tail(z), phi / z};
}

LogSumExpBounds log_sum_exp_bounds(std::span<const double> values) {
    if (values.empty()) throw DomainError("log_sum_exp_bounds: empty input");
    const double max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - max);
    const double lse = max + std::log(sum);
    return {max, lse, max + std::log(static_cast<double>(values.size()))};
}

double expected_pulls_bound(std::uint64_t horizon, double gap, double gamma) {
    if (!(gap > 0.0)) throw DomainError("expected_pulls_bound: gap must be positive");
    if (!(gamma > 0.0)) throw DomainError("expected_pulls_bound: gamma must be positive");
    if (horizon < 1) throw DomainError("expected_pulls_bound: horizon must be at least 1");
    const double gap_sq = gap * gap;
    const double t = static_cast<double>(horizon);
    return 8.0e4 * gamma * std::log(t * gap_sq / gamma + 300.0) / gap_sq + 24.0 * gamma / gap_sq;
}

namespace {

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

RegretEstimate assemble(const std::vector<double>& regret, const std::vector<double>& pseudo) {
    const auto r = mean_and_se(regret);
    const auto p = mean_and_se(pseudo);
    return {regret.size(), r.mean, r.se, p.mean, p.se};
}

}  // namespace

RegretEstimate empirical_regret(std::span<const Trajectory> trajectories, const BanditInstance& instance) {
    if (trajectories.empty()) throw DomainError("empirical_regret: no trajectories");
    const auto horizon = trajectories.front().horizon;
    std::vector<double> regret, pseudo;
    regret.reserve(trajectories.size());
    pseudo.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        if (!(traj.instance == instance) || traj.horizon != horizon) {
            throw DomainError("empirical_regret: trajectories come from different instances or horizons");
        }
        double rewards = 0.0;
        if (traj.steps.size() == traj.horizon) {
            for (const auto& s : traj.steps) rewards += s.reward;
        } else {
            for (ArmId a = 0; a < instance.num_arms(); ++a) {
                rewards += static_cast<double>(traj.final_state.count(a)) * traj.final_state.mean(a);
            }
        }
        double pr = 0.0;
        for (ArmId a = 0; a < instance.num_arms(); ++a) {
            pr += instance.gap(a) * static_cast<double>(traj.final_state.count(a));
        }
        regret.push_back(static_cast<double>(horizon) * instance.optimal_mean() - rewards);
        pseudo.push_back(pr);
    }
    return assemble(regret, pseudo);
}

RegretEstimate empirical_regret(std::span<const ReplicationSummary> summaries) {
    if (summaries.empty()) throw DomainError("empirical_regret: no summaries");
    std::vector<double> regret, pseudo;
    for (const auto& s : summaries) {
        regret.push_back(s.regret);
        pseudo.push_back(s.pseudo_regret);
    }
    return assemble(regret, pseudo);
}

}  // namespace stablets
