#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stablets/bandit.hpp"
#include "stablets/policy.hpp"

namespace stablets {

struct ExperimentConfig {
    BanditInstance instance{{ArmSpec{1.0, 1.0}, ArmSpec{0.0, 1.0}}};
    Policy policy = StableThompsonSampling{};
    std::uint64_t horizon = 10000;
    std::uint64_t replications = 1000;
    std::uint64_t master_seed = 1;
    std::vector<double> alphas;  ///< empty means the default 25-level grid
    std::filesystem::path output_dir = "out";
    unsigned workers = 0;        ///< 0 = hardware concurrency
    std::size_t histogram_bins = 50;
    double epsilon = 0.1;        ///< concentration band around 1

    /// Throws DomainError on T < K, R < 1, alpha outside (0, 1), zero bins or epsilon <= 0.
    void validate() const;

    /// alphas, or the default grid when none were configured.
    std::vector<double> alpha_grid() const;
};

/// Parses the line-oriented key = value format:
///
///     # comment
///     policy = stable_ts          # ts | stable_ts | ucb (default stable_ts)
///     horizon = 10000
///     replications = 10000
///     seed = 20251015
///     gamma_coefficient = 4       # stable_ts only
///     gamma_exponent = 0.4
///     levels = 0.90, 0.95, 0.99   # nominal levels 1 - alpha (optional)
///     arm = 1.0, 1.0              # mean, variance; one line per arm in order
///     arm = 0.0, 1.0
///
/// Optional keys: output_dir, workers, histogram_bins, epsilon. Unknown or
/// repeated scalar keys are rejected. Throws ParseError carrying the line and field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Inverse of parse_config (up to comments and formatting).
std::string format_config(const ExperimentConfig& config);

}  // namespace stablets
