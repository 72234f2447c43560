#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stablets/bandit.hpp"
#include "stablets/episode.hpp"
#include "stablets/policy.hpp"

namespace stablets {

/// Deterministic pull-count normalizer n*_{a,T} whose ratio n_{a,T} / n* should tend to 1.
///
/// Stable TS (|I| <= 2): T/|I| for optimal arms, (2/gap^2) gamma_T log T otherwise.
/// Standard TS: T for a unique optimal arm, (2/gap^2) log T for suboptimal arms.
///
/// Throws UnsupportedByTheory when no stability limit is claimed (stable TS
/// with |I| > 2, an optimal arm of standard TS with |I| >= 2, UCB).
double theorem1_normalizer(const BanditInstance& instance, const Policy& policy, std::uint64_t horizon, ArmId arm);

/// Normalizer used for reporting: theorem1_normalizer when supported, else the
/// same formula (T/|I| or 2 gamma log T / gap^2, gamma = 1 outside stable TS)
/// flagged as unsupported.
struct PullNormalizer {
    double value = 1.0;
    bool supported_by_theory = true;
};

std::vector<PullNormalizer> pull_normalizers(const BanditInstance& instance, const Policy& policy,
                                             std::uint64_t horizon);

struct PullRatioSample {
    std::uint64_t replication = 0;
    ArmId arm = 0;
    std::uint64_t raw_count = 0;
    double normalizer = 1.0;
    double normalized = 0.0;  ///< raw_count / normalizer
};

std::vector<PullRatioSample> normalized_pull_ratios(std::span<const Trajectory> trajectories, ArmId arm,
                                                    double normalizer);

struct ConcentrationSummary {
    double mean = 0.0;
    double std_dev = 0.0;           ///< sample standard deviation (n - 1)
    double fraction_within = 0.0;   ///< share of samples with |x - 1| <= epsilon
};

ConcentrationSummary concentration_summary(std::span<const double> values, double epsilon);
ConcentrationSummary concentration_summary(std::span<const PullRatioSample> samples, double epsilon);

enum class ReferenceDistribution { Uniform01, StandardNormal };

/// Exact two-sided Kolmogorov-Smirnov distance between the ECDF of `samples` and the reference CDF.
double ks_statistic(std::span<const double> samples, ReferenceDistribution reference);

/// Sorted distinct values with the right-continuous ECDF value at each.
std::vector<std::pair<double, double>> ecdf(std::span<const double> samples);

struct HistogramBin {
    double lo;
    double hi;
    std::uint64_t count;
};

/// Equal-width bins over [min, max] of the samples; the last bin is closed.
/// Degenerate ranges are widened to [x - 0.5, x + 0.5].
std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bin_count);

}  // namespace stablets
