#include "stablets/presets.hpp"

#include <cmath>

#include <json.hpp>

#include "stablets/errors.hpp"
#include "stablets/experiment.hpp"
#include "stablets/output.hpp"

namespace stablets {

namespace fs = std::filesystem;

ExperimentConfig four_arm_reference(bool full) {
    ExperimentConfig config;
    config.instance = BanditInstance({{1.0, 1.0}, {1.0, 1.0}, {0.5, 1.0}, {0.0, 1.0}});
    config.policy = StableThompsonSampling{GammaSchedule(4.0, 0.4)};
    config.horizon = 10000;
    config.replications = full ? kFullReplications : kDeskReplications;
    config.master_seed = kDefaultSeed;
    return config;
}

ExperimentConfig two_arm(const Policy& policy, double mean1, double mean2, bool full) {
    ExperimentConfig config;
    config.instance = BanditInstance({{mean1, 1.0}, {mean2, 1.0}});
    config.policy = policy;
    config.horizon = 10000;
    config.replications = full ? kFullReplications : kDeskReplications;
    config.master_seed = kDefaultSeed;
    return config;
}

void apply_overrides(ExperimentConfig& config, const RunOverrides& overrides) {
    if (overrides.full) config.replications = kFullReplications;
    if (overrides.seed) config.master_seed = *overrides.seed;
    if (overrides.replications) config.replications = *overrides.replications;
    if (overrides.horizon) config.horizon = *overrides.horizon;
    if (overrides.workers) config.workers = *overrides.workers;
    config.validate();
}

namespace {

struct FigureWriter {
    fs::path dir;
    FigureReport report;

    void write(const std::string& name, const std::string& contents) {
        write_file_atomic(dir / name, contents);
        report.files.push_back(dir / name);
    }

    void histogram_file(const std::string& name, const ExperimentConfig& config, ArmId arm, const std::string& quantity,
                        std::optional<double> normalizer, bool supported, const std::vector<double>& values) {
        HistogramRecord record;
        record.arm = arm;
        record.quantity = quantity;
        record.normalizer = normalizer;
        record.supported_by_theory = supported;
        record.bins = histogram(values, config.histogram_bins);
        record.n_samples = values.size();
        record.policy = policy_name(config.policy);
        record.horizon = config.horizon;
        record.seed = config.master_seed;
        write(name, histogram_json(record));
    }
};

std::vector<double> standardized_errors(const std::vector<ReplicationSummary>& summaries, ArmId arm) {
    std::vector<double> out;
    for (const auto& s : summaries) {
        if (s.arms[arm].standardized_error) out.push_back(*s.arms[arm].standardized_error);
    }
    return out;
}

std::vector<double> pull_ratios(const std::vector<ReplicationSummary>& summaries, ArmId arm, double normalizer) {
    std::vector<double> out;
    out.reserve(summaries.size());
    for (const auto& s : summaries) out.push_back(static_cast<double>(s.arms[arm].n) / normalizer);
    return out;
}

std::string fmt(double v) { return format_number(v); }

std::string coverage_line(const std::string& label, const std::vector<CoverageRow>& rows) {
    std::string line = label + " coverage at 0.95:";
    for (const auto& row : rows) {
        if (std::fabs(row.level - 0.95) < 1e-9) line += " arm" + std::to_string(row.arm + 1) + "=" + fmt(row.coverage);
    }
    return line;
}

void figure1(FigureWriter& w, const RunOverrides& ov) {
    auto ts = two_arm(ThompsonSampling{}, 0.0, 0.0);
    auto sts = two_arm(StableThompsonSampling{GammaSchedule(4.0, 0.4)}, 0.0, 0.0);
    apply_overrides(ts, ov);
    apply_overrides(sts, ov);
    const auto ts_runs = run_experiment(ts);
    const auto sts_runs = run_experiment(sts);
    for (ArmId a = 0; a < 2; ++a) {
        const auto errs = standardized_errors(ts_runs, a);
        w.histogram_file("fig1_ts_standardized_error_arm" + std::to_string(a + 1) + ".json", ts, a,
                         "standardized_error", std::nullopt, false, errs);
        if (errs.size() >= 10) {
            w.report.lines.push_back("TS arm " + std::to_string(a + 1) + " KS vs N(0,1): " +
                                     fmt(ks_statistic(errs, ReferenceDistribution::StandardNormal)));
        }
    }
    const auto ts_cov = coverage_curve(ts_runs, ts.instance, ts.alpha_grid());
    const auto sts_cov = coverage_curve(sts_runs, sts.instance, sts.alpha_grid());
    w.write("fig1_ts_coverage.csv", coverage_csv(ts_cov));
    w.write("fig1_stable_ts_coverage.csv", coverage_csv(sts_cov));
    w.report.lines.push_back(coverage_line("TS", ts_cov));
    w.report.lines.push_back(coverage_line("stable TS", sts_cov));
    w.write("fig1_metadata.json", metadata_json(ts, {}) );
}

void figure2(FigureWriter& w, const RunOverrides& ov) {
    auto unequal = two_arm(ThompsonSampling{}, 1.0, 0.0);
    auto equal = two_arm(ThompsonSampling{}, 0.0, 0.0);
    apply_overrides(unequal, ov);
    apply_overrides(equal, ov);
    const auto a_runs = run_experiment(unequal);
    const auto b_runs = run_experiment(equal);
    const double t = static_cast<double>(unequal.horizon);
    const double two_log_t = 2.0 * std::log(t);

    const auto a1 = pull_ratios(a_runs, 0, t);
    const auto a2 = pull_ratios(a_runs, 1, two_log_t);
    const auto b1 = pull_ratios(b_runs, 0, static_cast<double>(equal.horizon));
    const auto b2 = pull_ratios(b_runs, 1, static_cast<double>(equal.horizon));
    w.histogram_file("fig2_unequal_arm1_n_over_T.json", unequal, 0, "n/T", t, true, a1);
    w.histogram_file("fig2_unequal_arm2_n_over_2logT.json", unequal, 1, "n/(2 log T)", two_log_t, true, a2);
    w.histogram_file("fig2_equal_arm1_n_over_T.json", equal, 0, "n/T", static_cast<double>(equal.horizon), false, b1);
    w.histogram_file("fig2_equal_arm2_n_over_T.json", equal, 1, "n/T", static_cast<double>(equal.horizon), false, b2);

    auto describe = [&](const std::string& label, const std::vector<double>& v) {
        if (v.size() < 2) return;
        const auto c = concentration_summary(v, unequal.epsilon);
        w.report.lines.push_back(label + ": mean " + fmt(c.mean) + ", std " + fmt(c.std_dev));
    };
    describe("means (1,0) n1/T", a1);
    describe("means (1,0) n2/(2 log T)", a2);
    describe("means (0,0) n1/T", b1);
    describe("means (0,0) n2/T", b2);
    if (b1.size() >= 10) {
        w.report.lines.push_back("means (0,0) n1/T KS vs U(0,1): " + fmt(ks_statistic(b1, ReferenceDistribution::Uniform01)));
    }
    w.write("fig2_metadata.json", metadata_json(unequal, {}));
}

void figure3(FigureWriter& w, const RunOverrides& ov) {
    auto config = four_arm_reference();
    apply_overrides(config, ov);
    const auto runs = run_experiment(config);
    for (ArmId a = 0; a < config.instance.num_arms(); ++a) {
        const auto errs = standardized_errors(runs, a);
        w.histogram_file("fig3_standardized_error_arm" + std::to_string(a + 1) + ".json", config, a,
                         "standardized_error", std::nullopt, true, errs);
        if (errs.size() >= 10) {
            w.report.lines.push_back("stable TS arm " + std::to_string(a + 1) + " KS vs N(0,1): " +
                                     fmt(ks_statistic(errs, ReferenceDistribution::StandardNormal)));
        }
    }
    w.write("fig3_metadata.json", metadata_json(config, {}));
}

void figure4(FigureWriter& w, const RunOverrides& ov) {
    auto config = four_arm_reference();
    apply_overrides(config, ov);
    const auto runs = run_experiment(config);
    const auto rows = coverage_curve(runs, config.instance, config.alpha_grid());
    w.write("fig4_coverage.csv", coverage_csv(rows));
    w.report.lines.push_back(coverage_line("stable TS", rows));
    w.write("fig4_metadata.json", metadata_json(config, {}));
}

}  // namespace

FigureReport reproduce_figure(int figure, const RunOverrides& overrides, const fs::path& dir) {
    FigureWriter writer{dir, FigureReport{figure, {}, {}}};
    switch (figure) {
        case 1: figure1(writer, overrides); break;
        case 2: figure2(writer, overrides); break;
        case 3: figure3(writer, overrides); break;
        case 4: figure4(writer, overrides); break;
        default: throw DomainError("reproduce_figure: figure must be 1, 2, 3 or 4");
    }
    return writer.report;
}

}  // namespace stablets
