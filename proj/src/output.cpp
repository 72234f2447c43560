#include "stablets/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "stablets/errors.hpp"

#ifndef STABLETS_VERSION
#define STABLETS_VERSION "0.0.0"
#endif

namespace stablets {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string version_string() { return std::string("stablets ") + STABLETS_VERSION; }

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

namespace {

ordered_json json_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return std::strtod(format_number(value).c_str(), nullptr);
}

std::string opt_number(const std::optional<double>& value) { return value ? format_number(*value) : std::string(); }

}  // namespace

Diagnostics compute_diagnostics(const ExperimentConfig& config, std::span<const ReplicationSummary> summaries) {
    if (summaries.empty()) throw DomainError("compute_diagnostics: no summaries");
    Diagnostics out;
    const auto normalizers = pull_normalizers(config.instance, config.policy, config.horizon);
    for (ArmId a = 0; a < config.instance.num_arms(); ++a) {
        ArmDiagnostics arm;
        arm.arm = a;
        arm.normalizer = normalizers[a];
        for (const auto& s : summaries) {
            arm.normalized_pulls.push_back(s.arms[a].normalized_pulls);
            if (s.arms[a].standardized_error) arm.standardized_errors.push_back(*s.arms[a].standardized_error);
        }
        if (arm.normalized_pulls.size() >= 2) arm.concentration = concentration_summary(arm.normalized_pulls, config.epsilon);
        arm.bins = histogram(arm.normalized_pulls, config.histogram_bins);
        if (arm.standardized_errors.size() >= 10) {
            arm.ks_standardized = ks_statistic(arm.standardized_errors, ReferenceDistribution::StandardNormal);
        }
        out.arms.push_back(std::move(arm));
    }
    const auto alphas = config.alpha_grid();
    out.coverage = coverage_curve(summaries, config.instance, alphas);
    out.regret = empirical_regret(summaries);
    return out;
}

std::string replication_csv(std::span<const ReplicationSummary> summaries) {
    if (summaries.empty()) throw DomainError("replication_csv: no summaries");
    const auto& alphas = summaries.front().alphas;
    std::ostringstream out;
    out << "replication,arm,n,mu_hat,sigma_hat,std_err";
    for (double alpha : alphas) {
        const auto tag = format_number(alpha);
        out << ",ci_lo_" << tag << ",ci_hi_" << tag << ",covered_" << tag;
    }
    out << '\n';
    for (const auto& s : summaries) {
        if (s.alphas != alphas) throw DomainError("replication_csv: summaries use different alpha grids");
        for (const auto& arm : s.arms) {
            out << s.replication << ',' << arm.arm + 1 << ',' << arm.n << ',' << format_number(arm.mean) << ','
                << opt_number(arm.sample_std) << ',' << opt_number(arm.standardized_error);
            for (std::size_t g = 0; g < arm.intervals.size(); ++g) {
                const auto& ci = arm.intervals[g];
                if (ci) {
                    out << ',' << format_number(ci->lower) << ',' << format_number(ci->upper) << ','
                        << (arm.covered[g] ? 1 : 0);
                } else {
                    out << ",,,0";
                }
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string coverage_csv(std::span<const CoverageRow> rows) {
    std::ostringstream out;
    out << "arm,level,coverage,stderr\n";
    for (const auto& row : rows) {
        out << row.arm + 1 << ',' << format_number(row.level) << ',' << format_number(row.coverage) << ','
            << format_number(row.standard_error) << '\n';
    }
    return out.str();
}

std::string histogram_json(const HistogramRecord& record) {
    ordered_json j;
    j["arm"] = record.arm + 1;
    j["quantity"] = record.quantity;
    j["normalizer"] = record.normalizer ? json_number(*record.normalizer) : ordered_json(nullptr);
    j["supported_by_theory"] = record.supported_by_theory;
    j["bin_count"] = record.bins.size();
    auto bins = ordered_json::array();
    for (const auto& b : record.bins) {
        bins.push_back(ordered_json{{"lo", json_number(b.lo)}, {"hi", json_number(b.hi)}, {"count", b.count}});
    }
    j["bins"] = std::move(bins);
    j["n_samples"] = record.n_samples;
    j["policy"] = record.policy;
    j["T"] = record.horizon;
    j["seed"] = record.seed;
    return j.dump(2) + "\n";
}

std::string metadata_json(const ExperimentConfig& config, const std::vector<std::string>& files) {
    ordered_json cfg;
    auto arms = ordered_json::array();
    for (const auto& arm : config.instance.arms()) {
        arms.push_back(ordered_json{{"mean", json_number(arm.mean)}, {"variance", json_number(arm.variance)}});
    }
    cfg["arms"] = std::move(arms);
    cfg["policy"] = policy_name(config.policy);
    if (const auto* stable = std::get_if<StableThompsonSampling>(&config.policy)) {
        cfg["gamma_coefficient"] = json_number(stable->schedule.coefficient());
        cfg["gamma_exponent"] = json_number(stable->schedule.exponent());
        cfg["gamma_T"] = json_number(gamma_value(stable->schedule, config.horizon));
    }
    cfg["horizon"] = config.horizon;
    cfg["replications"] = config.replications;
    cfg["seed"] = config.master_seed;
    auto levels = ordered_json::array();
    for (double a : config.alpha_grid()) levels.push_back(json_number(1.0 - a));
    cfg["levels"] = std::move(levels);
    cfg["histogram_bins"] = config.histogram_bins;
    cfg["epsilon"] = json_number(config.epsilon);
    // worker count and output directory are left out: they must not change the bytes of any output

    ordered_json j;
    j["version"] = version_string();
    j["normal_variates"] = "inverse-cdf (AS241) over Philox4x32-10 uniforms";
    j["config"] = std::move(cfg);
    j["files"] = files;
    return j.dump(2) + "\n";
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("write failed for " + path.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

EmittedFiles emit_results(const ExperimentConfig& config, std::span<const ReplicationSummary> summaries,
                          const Diagnostics& diagnostics, const fs::path& dir) {
    if (summaries.empty()) throw DomainError("emit_results: no summaries");
    EmittedFiles files;
    std::vector<std::string> names;

    files.replications_csv = dir / "replications.csv";
    write_file_atomic(files.replications_csv, replication_csv(summaries));
    names.push_back("replications.csv");

    files.coverage_csv = dir / "coverage.csv";
    write_file_atomic(files.coverage_csv, coverage_csv(diagnostics.coverage));
    names.push_back("coverage.csv");

    for (const auto& arm : diagnostics.arms) {
        HistogramRecord record;
        record.arm = arm.arm;
        record.quantity = "normalized_pulls";
        record.normalizer = arm.normalizer.value;
        record.supported_by_theory = arm.normalizer.supported_by_theory;
        record.bins = arm.bins;
        record.n_samples = arm.normalized_pulls.size();
        record.policy = policy_name(config.policy);
        record.horizon = config.horizon;
        record.seed = config.master_seed;
        const auto name = "histogram_arm" + std::to_string(arm.arm + 1) + ".json";
        files.histograms.push_back(dir / name);
        write_file_atomic(files.histograms.back(), histogram_json(record));
        names.push_back(name);
    }

    files.metadata_json = dir / "metadata.json";
    write_file_atomic(files.metadata_json, metadata_json(config, names));
    return files;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> opt_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::strtod(s.c_str(), nullptr);
}

}  // namespace

std::vector<ReplicationSummary> load_replication_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 6 || (header.size() - 6) % 3 != 0) throw IoError(path.string() + ": unexpected header");
    std::vector<double> alphas;
    for (std::size_t c = 6; c < header.size(); c += 3) alphas.push_back(std::strtod(header[c].substr(6).c_str(), nullptr));

    std::vector<ReplicationSummary> out;
    std::map<std::uint64_t, std::size_t> index;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw IoError(path.string() + ": ragged row");
        const auto rep = std::stoull(f[0]);
        auto [it, inserted] = index.try_emplace(rep, out.size());
        if (inserted) {
            out.emplace_back();
            out.back().replication = rep;
            out.back().alphas = alphas;
        }
        auto& summary = out[it->second];
        ArmSummary arm;
        arm.arm = std::stoull(f[1]) - 1;
        arm.n = std::stoull(f[2]);
        arm.mean = std::strtod(f[3].c_str(), nullptr);
        arm.sample_std = opt_real(f[4]);
        arm.standardized_error = opt_real(f[5]);
        for (std::size_t g = 0; g < alphas.size(); ++g) {
            const auto lo = opt_real(f[6 + 3 * g]);
            const auto hi = opt_real(f[7 + 3 * g]);
            if (lo && hi) {
                arm.intervals.emplace_back(ConfidenceInterval{arm.arm, 1.0 - alphas[g], *lo, *hi});
            } else {
                arm.intervals.emplace_back(std::nullopt);
            }
            arm.covered.push_back(f[8 + 3 * g] == "1");
        }
        summary.arms.push_back(std::move(arm));
    }
    return out;
}

}  // namespace stablets
