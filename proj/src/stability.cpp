#include "stablets/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stablets/errors.hpp"
#include "stablets/normal.hpp"

namespace stablets {

namespace {

double suboptimal_normalizer(double gap, double gamma, std::uint64_t horizon) {
    return 2.0 / (gap * gap) * gamma * std::log(static_cast<double>(horizon));
}

}  // namespace

double theorem1_normalizer(const BanditInstance& instance, const Policy& policy, std::uint64_t horizon, ArmId arm) {
    if (horizon < 3) throw DomainError("theorem1_normalizer: horizon must be at least 3");
    const double gap = instance.gap(arm);
    const auto optimal_count = instance.optimal_set().size();

    if (std::holds_alternative<UpperConfidenceBound>(policy)) {
        throw UnsupportedByTheory("no pull-count normalizer is provided for UCB");
    }
    if (const auto* stable = std::get_if<StableThompsonSampling>(&policy)) {
        if (optimal_count > 2) {
            throw UnsupportedByTheory("stable TS stability limits are only established for at most 2 optimal arms");
        }
        if (gap == 0.0) return static_cast<double>(horizon) / static_cast<double>(optimal_count);
        return suboptimal_normalizer(gap, gamma_value(stable->schedule, horizon), horizon);
    }
    if (gap == 0.0) {
        if (optimal_count > 1) throw UnsupportedByTheory("standard TS is unstable for multiple optimal arms");
        return static_cast<double>(horizon);
    }
    return suboptimal_normalizer(gap, 1.0, horizon);
}

std::vector<PullNormalizer> pull_normalizers(const BanditInstance& instance, const Policy& policy,
                                             std::uint64_t horizon) {
    std::vector<PullNormalizer> out;
    out.reserve(instance.num_arms());
    const double gamma = std::holds_alternative<StableThompsonSampling>(policy) && horizon >= 3
                             ? gamma_value(std::get<StableThompsonSampling>(policy).schedule, horizon)
                             : 1.0;
    for (ArmId a = 0; a < instance.num_arms(); ++a) {
        try {
            out.push_back({theorem1_normalizer(instance, policy, horizon, a), true});
        } catch (const UnsupportedByTheory&) {
            const double gap = instance.gap(a);
            const double value = gap == 0.0
                                     ? static_cast<double>(horizon) / static_cast<double>(instance.optimal_set().size())
                                     : suboptimal_normalizer(gap, gamma, horizon);
            out.push_back({value, false});
        }
    }
    return out;
}

std::vector<PullRatioSample> normalized_pull_ratios(std::span<const Trajectory> trajectories, ArmId arm,
                                                    double normalizer) {
    if (!(normalizer > 0.0)) throw DomainError("normalized_pull_ratios: normalizer must be positive");
    std::vector<PullRatioSample> out;
    out.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        const auto n = traj.final_state.count(arm);
        out.push_back({traj.replication, arm, n, normalizer, static_cast<double>(n) / normalizer});
    }
    return out;
}

ConcentrationSummary concentration_summary(std::span<const double> values, double epsilon) {
    if (values.size() < 2) throw DomainError("concentration_summary: need at least 2 samples");
    if (!(epsilon > 0.0)) throw DomainError("concentration_summary: epsilon must be positive");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    std::size_t within = 0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
        if (std::fabs(v - 1.0) <= epsilon) ++within;
    }
    return {mean, std::sqrt(ss / (n - 1.0)), static_cast<double>(within) / n};
}

ConcentrationSummary concentration_summary(std::span<const PullRatioSample> samples, double epsilon) {
    std::vector<double> values;
    values.reserve(samples.size());
    for (const auto& s : samples) values.push_back(s.normalized);
    return concentration_summary(values, epsilon);
}

double ks_statistic(std::span<const double> samples, ReferenceDistribution reference) {
    if (samples.size() < 10) throw DomainError("ks_statistic: need at least 10 samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    auto cdf = [reference](double x) {
        if (reference == ReferenceDistribution::StandardNormal) return normal_cdf(x);
        return std::clamp(x, 0.0, 1.0);
    };
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

std::vector<std::pair<double, double>> ecdf(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("ecdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    }
    return out;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bin_count) {
    if (samples.empty()) throw DomainError("histogram: no samples");
    if (bin_count == 0) throw DomainError("histogram: bin count must be positive");
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bin_count);
    std::vector<HistogramBin> bins(bin_count);
    for (std::size_t b = 0; b < bin_count; ++b) {
        bins[b].lo = lo + width * static_cast<double>(b);
        bins[b].hi = b + 1 == bin_count ? hi : lo + width * static_cast<double>(b + 1);
        bins[b].count = 0;
    }
    for (double x : samples) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= bin_count) b = bin_count - 1;
        ++bins[b].count;
    }
    return bins;
}

}  // namespace stablets
