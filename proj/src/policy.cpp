#include "stablets/policy.hpp"

#include <cmath>

#include "stablets/errors.hpp"

namespace stablets {

GammaSchedule::GammaSchedule(double coefficient, double exponent) : coefficient_(coefficient), exponent_(exponent) {
    if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
        throw DomainError("gamma coefficient must be positive and finite");
    }
    if (!std::isfinite(exponent)) throw DomainError("gamma exponent must be finite");
}

double gamma_value(const GammaSchedule& schedule, std::uint64_t horizon) {
    if (horizon < 3) throw DomainError("gamma_value: horizon must be at least 3");
    return schedule.coefficient() * std::pow(std::log(static_cast<double>(horizon)), schedule.exponent());
}

GammaConditionReport check_gamma_condition(const GammaSchedule& schedule, std::span<const std::uint64_t> horizons) {
    if (horizons.size() < 2) throw DomainError("check_gamma_condition: need at least two horizons");
    GammaConditionReport report;
    report.growth_ratio_increasing = true;
    report.decay_ratio_increasing = true;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        const auto horizon = horizons[i];
        if (horizon < 16) throw DomainError("check_gamma_condition: horizons must be at least 16");
        if (i > 0 && horizon <= horizons[i - 1]) throw DomainError("check_gamma_condition: horizons must increase");
        const double log_t = std::log(static_cast<double>(horizon));
        const double gamma = gamma_value(schedule, horizon);
        GammaConditionRow row{horizon, gamma, gamma / std::log(log_t), std::sqrt(log_t) / gamma};
        if (!report.rows.empty()) {
            const auto& prev = report.rows.back();
            report.growth_ratio_increasing = report.growth_ratio_increasing && row.growth_ratio > prev.growth_ratio;
            report.decay_ratio_increasing = report.decay_ratio_increasing && row.decay_ratio > prev.decay_ratio;
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string policy_name(const Policy& policy) {
    struct Visitor {
        std::string operator()(const ThompsonSampling&) const { return "ts"; }
        std::string operator()(const StableThompsonSampling&) const { return "stable_ts"; }
        std::string operator()(const UpperConfidenceBound&) const { return "ucb"; }
    };
    return std::visit(Visitor{}, policy);
}

std::optional<double> policy_gamma(const Policy& policy, std::uint64_t horizon) {
    struct Visitor {
        std::uint64_t horizon;
        std::optional<double> operator()(const ThompsonSampling&) const { return 1.0; }
        std::optional<double> operator()(const StableThompsonSampling& p) const {
            return gamma_value(p.schedule, horizon);
        }
        std::optional<double> operator()(const UpperConfidenceBound&) const { return std::nullopt; }
    };
    return std::visit(Visitor{horizon}, policy);
}

PolicyState::PolicyState(std::size_t num_arms)
    : counts_(num_arms, 0), means_(num_arms, 0.0), sum_sq_dev_(num_arms, 0.0) {
    if (num_arms == 0) throw DomainError("PolicyState needs at least one arm");
}

PolicyState PolicyState::from_statistics(std::vector<std::uint64_t> counts, std::vector<double> means,
                                         std::vector<double> sum_sq_dev) {
    if (counts.size() != means.size()) throw DomainError("counts and means differ in length");
    if (sum_sq_dev.empty()) sum_sq_dev.assign(counts.size(), 0.0);
    if (sum_sq_dev.size() != counts.size()) throw DomainError("sum_sq_dev length mismatch");
    PolicyState state(counts.size());
    state.counts_ = std::move(counts);
    state.means_ = std::move(means);
    state.sum_sq_dev_ = std::move(sum_sq_dev);
    state.round_ = 0;
    for (auto n : state.counts_) state.round_ += n;
    return state;
}

std::optional<double> PolicyState::sample_variance(ArmId a) const {
    const auto n = count(a);
    if (n < 2) return std::nullopt;
    return sum_sq_dev_[a] / static_cast<double>(n - 1);
}

bool PolicyState::initialized() const noexcept {
    for (auto n : counts_) {
        if (n == 0) return false;
    }
    return true;
}

void PolicyState::update(ArmId arm, double reward) {
    if (arm >= counts_.size()) throw DomainError("update: arm index out of range");
    if (!std::isfinite(reward)) throw DomainError("update: reward must be finite");
    const double previous = means_[arm];
    const auto n = ++counts_[arm];
    const double updated = (static_cast<double>(n - 1) * previous + reward) / static_cast<double>(n);
    sum_sq_dev_[arm] += (reward - previous) * (reward - updated);
    means_[arm] = updated;
    ++round_;
}

namespace {

void require_initialized(const PolicyState& state) {
    if (!state.initialized()) throw StateError("every arm must be pulled once before posterior sampling");
}

ArmId argmax_posterior(const PolicyState& state, double gamma, RngStream& rng) {
    const auto counts = state.counts();
    const auto means = state.means();
    ArmId best = 0;
    double best_value = -INFINITY;
    for (ArmId a = 0; a < counts.size(); ++a) {
        const double theta = means[a] + std::sqrt(gamma / static_cast<double>(counts[a])) * rng.normal();
        if (theta > best_value) {
            best_value = theta;
            best = a;
        }
    }
    return best;
}

}  // namespace

ArmId ts_select(const PolicyState& state, RngStream& rng) {
    require_initialized(state);
    return argmax_posterior(state, 1.0, rng);
}

ArmId stable_ts_select(const PolicyState& state, double gamma, RngStream& rng) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("stable_ts_select: gamma must be positive");
    require_initialized(state);
    return argmax_posterior(state, gamma, rng);
}

ArmId ucb_select(const PolicyState& state, double horizon) {
    require_initialized(state);
    if (!(horizon >= 1.0)) throw DomainError("ucb_select: horizon must be at least 1");
    const double log_t = std::log(horizon);
    ArmId best = 0;
    double best_value = -INFINITY;
    for (ArmId a = 0; a < state.num_arms(); ++a) {
        const double index = state.mean(a) + std::sqrt(2.0 * log_t / static_cast<double>(state.count(a)));
        if (index > best_value) {
            best_value = index;
            best = a;
        }
    }
    return best;
}

}  // namespace stablets
