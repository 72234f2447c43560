#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablets/config.hpp"
#include "stablets/inference.hpp"
#include "stablets/stability.hpp"
#include "stablets/summary.hpp"
#include "stablets/theory.hpp"

namespace stablets {

/// Library version string echoed into run metadata.
std::string version_string();

/// %.9g; CSV and JSON numbers go through this so output is platform independent.
std::string format_number(double value);

struct ArmDiagnostics {
    ArmId arm = 0;
    PullNormalizer normalizer;
    std::vector<double> normalized_pulls;      ///< one per replication, in replication order
    std::optional<ConcentrationSummary> concentration;  ///< needs >= 2 replications
    std::vector<HistogramBin> bins;
    std::vector<double> standardized_errors;   ///< defined values only
    std::optional<double> ks_standardized;     ///< KS vs N(0,1); needs >= 10 defined values
};

struct Diagnostics {
    std::vector<ArmDiagnostics> arms;
    std::vector<CoverageRow> coverage;
    RegretEstimate regret;
};

Diagnostics compute_diagnostics(const ExperimentConfig& config, std::span<const ReplicationSummary> summaries);

std::string replication_csv(std::span<const ReplicationSummary> summaries);
std::string coverage_csv(std::span<const CoverageRow> rows);

struct HistogramRecord {
    ArmId arm = 0;
    std::string quantity;  ///< e.g. "normalized_pulls" or "standardized_error"
    std::optional<double> normalizer;
    bool supported_by_theory = true;
    std::vector<HistogramBin> bins;
    std::size_t n_samples = 0;
    std::string policy;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
};

std::string histogram_json(const HistogramRecord& record);
std::string metadata_json(const ExperimentConfig& config, const std::vector<std::string>& files);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
/// Throws IoError; an existing file at `path` is left untouched on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct EmittedFiles {
    std::filesystem::path replications_csv;
    std::filesystem::path coverage_csv;
    std::vector<std::filesystem::path> histograms;
    std::filesystem::path metadata_json;
};

/// replications.csv, coverage.csv, histogram_arm<k>.json per arm and metadata.json under `dir`.
EmittedFiles emit_results(const ExperimentConfig& config, std::span<const ReplicationSummary> summaries,
                          const Diagnostics& diagnostics, const std::filesystem::path& dir);

/// Reads replications.csv back into summaries (regret fields are not persisted and stay 0).
std::vector<ReplicationSummary> load_replication_csv(const std::filesystem::path& path);

}  // namespace stablets
