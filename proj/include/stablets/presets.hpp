#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stablets/config.hpp"

namespace stablets {

inline constexpr std::uint64_t kDefaultSeed = 20251015;
inline constexpr std::uint64_t kDeskReplications = 1000;
inline constexpr std::uint64_t kFullReplications = 10000;

/// mu = (1, 1, 0.5, 0), unit variances, T = 10^4, gamma_T = 4 (log T)^0.4, stable TS.
ExperimentConfig four_arm_reference(bool full = false);

/// Two-armed unit-variance instance with the given means.
ExperimentConfig two_arm(const Policy& policy, double mean1, double mean2, bool full = false);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> horizon;
    std::optional<unsigned> workers;
    bool full = false;
};

void apply_overrides(ExperimentConfig& config, const RunOverrides& overrides);

struct FigureReport {
    int figure = 0;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> lines;  ///< human-readable summary
};

/// Runs the preset experiment(s) behind figure 1-4 and writes the plot data under `dir`.
///
/// 1: equal-means two-arm bandit; TS standardized-error histograms, TS and stable TS coverage curves.
/// 2: TS pull-count histograms, n1/T and n2/(2 log T) for means (1, 0), n1/T and n2/T for (0, 0).
/// 3: stable TS on the four-arm reference; standardized-error histograms with KS distances.
/// 4: stable TS on the four-arm reference; coverage curves.
FigureReport reproduce_figure(int figure, const RunOverrides& overrides, const std::filesystem::path& dir);

}  // namespace stablets
