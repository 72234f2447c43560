// stablets command-line driver.
//
// Exit codes: 0 success, 1 a check failed or output could not be written,
// 2 usage or configuration error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stablets/experiment.hpp"
#include "stablets/output.hpp"
#include "stablets/presets.hpp"
#include "stablets/theory.hpp"
#include "stablets/verification.hpp"

namespace fs = std::filesystem;
using namespace stablets;

namespace {

constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> horizon;
    std::optional<unsigned> workers;
    std::string out;
    bool full = false;
    int figure = 0;
    bool json = false;
};

RunOverrides overrides(const Flags& f) {
    RunOverrides o;
    o.seed = f.seed;
    o.replications = f.replications;
    o.horizon = f.horizon;
    o.workers = f.workers;
    o.full = f.full;
    return o;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig load_config(const Flags& f) {
    if (f.config.empty()) throw UsageError("--config is required (or set STABLETS_CONFIG)");
    auto config = parse_config_file(f.config);
    apply_overrides(config, overrides(f));
    if (!f.out.empty()) config.output_dir = f.out;
    return config;
}

fs::path out_dir(const Flags& f, const fs::path& fallback) { return f.out.empty() ? fallback : fs::path(f.out); }

std::string arm_label(ArmId a) { return "arm " + std::to_string(a + 1); }

struct Run {
    ExperimentConfig config;
    std::vector<ReplicationSummary> summaries;
    Diagnostics diagnostics;
};

Run run_and_emit(const Flags& f) {
    Run run{load_config(f), {}, {}};
    run.summaries = run_experiment(run.config);
    run.diagnostics = compute_diagnostics(run.config, run.summaries);
    emit_results(run.config, run.summaries, run.diagnostics, run.config.output_dir);
    return run;
}

void print_header(const ExperimentConfig& c) {
    std::printf("%s: policy %s, K=%zu, T=%llu, R=%llu, seed %llu -> %s\n", version_string().c_str(),
                policy_name(c.policy).c_str(), c.instance.num_arms(), static_cast<unsigned long long>(c.horizon),
                static_cast<unsigned long long>(c.replications), static_cast<unsigned long long>(c.master_seed),
                c.output_dir.string().c_str());
}

void print_coverage(const Run& run, double level_filter) {
    for (const auto& row : run.diagnostics.coverage) {
        if (level_filter > 0 && std::fabs(row.level - level_filter) > 1e-9) continue;
        std::printf("  %s level %s coverage %s (se %s)\n", arm_label(row.arm).c_str(), format_number(row.level).c_str(),
                    format_number(row.coverage).c_str(), format_number(row.standard_error).c_str());
    }
}

void print_stability(const Run& run) {
    for (const auto& arm : run.diagnostics.arms) {
        std::printf("  %s normalizer %s%s", arm_label(arm.arm).c_str(), format_number(arm.normalizer.value).c_str(),
                    arm.normalizer.supported_by_theory ? "" : " (no stability limit claimed)");
        if (arm.concentration) {
            std::printf(", n/n* mean %s std %s", format_number(arm.concentration->mean).c_str(),
                        format_number(arm.concentration->std_dev).c_str());
        }
        if (arm.ks_standardized) std::printf(", KS(std err, N(0,1)) %s", format_number(*arm.ks_standardized).c_str());
        std::printf("\n");
    }
}

void print_regret(const Run& run) {
    const auto& r = run.diagnostics.regret;
    std::printf("  regret %s (se %s), pseudo-regret %s (se %s)\n", format_number(r.mean_regret).c_str(),
                format_number(r.regret_standard_error).c_str(), format_number(r.mean_pseudo_regret).c_str(),
                format_number(r.pseudo_regret_standard_error).c_str());
    const auto gamma = policy_gamma(run.config.policy, run.config.horizon);
    if (!gamma) return;
    for (ArmId a = 0; a < run.config.instance.num_arms(); ++a) {
        const double gap = run.config.instance.gap(a);
        if (gap <= 0) continue;
        double mean_n = 0;
        for (const auto& s : run.summaries) mean_n += static_cast<double>(s.arms[a].n);
        mean_n /= static_cast<double>(run.summaries.size());
        std::printf("  %s mean pulls %s, expected-pulls bound %s\n", arm_label(a).c_str(), format_number(mean_n).c_str(),
                    format_number(expected_pulls_bound(run.config.horizon, gap, *gamma)).c_str());
    }
}

int cmd_verify(const Flags& f) {
    VerificationOptions options;
    if (f.seed) options.seed = *f.seed;
    if (f.workers) options.workers = *f.workers;
    if (f.horizon) options.horizon = *f.horizon;
    if (f.replications) options.lil_replications = *f.replications;
    const auto checks = verify_theory(options);
    const auto json = verification_json(checks);
    if (f.json) {
        std::cout << json;
    } else {
        std::cout << verification_text(checks);
    }
    if (!f.out.empty()) write_file_atomic(fs::path(f.out) / "verify_theory.json", json);
    return all_passed(checks) ? 0 : kFailure;
}

int cmd_figure(const Flags& f) {
    const auto dir = out_dir(f, "figure" + std::to_string(f.figure));
    const auto report = reproduce_figure(f.figure, overrides(f), dir);
    std::printf("figure %d -> %s\n", report.figure, dir.string().c_str());
    for (const auto& line : report.lines) std::printf("  %s\n", line.c_str());
    for (const auto& file : report.files) std::printf("  wrote %s\n", file.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stable Thompson Sampling experiments"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--config", f.config, "experiment config file")->envname("STABLETS_CONFIG");
    app.add_option("--seed", f.seed, "master seed")->envname("STABLETS_SEED");
    app.add_option("--replications", f.replications, "number of replications R")->envname("STABLETS_REPLICATIONS");
    app.add_option("--horizon", f.horizon, "horizon T")->envname("STABLETS_HORIZON");
    app.add_option("--workers", f.workers, "worker threads (0 = all cores)")->envname("STABLETS_WORKERS");
    app.add_option("--out", f.out, "output directory")->envname("STABLETS_OUT");
    app.add_flag("--full", f.full, "full replication count (R = 10^4)")->envname("STABLETS_FULL");

    auto* simulate = app.add_subcommand("simulate", "run the configured experiment and write all outputs");
    auto* coverage = app.add_subcommand("coverage", "run and report confidence-interval coverage");
    auto* stability = app.add_subcommand("stability", "run and report normalized pull counts and KS distances");
    auto* regret = app.add_subcommand("regret", "run and report regret against the expected-pulls bound");
    auto* verify = app.add_subcommand("verify-theory", "run the inequality and proxy checks");
    verify->add_flag("--json", f.json, "print the table as JSON");
    auto* figure = app.add_subcommand("reproduce-figure", "run the preset behind a figure and write its plot data");
    figure->add_option("figure", f.figure, "figure number")->required()->check(CLI::Range(1, 4));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(f);
        if (figure->parsed()) return cmd_figure(f);
        const auto run = run_and_emit(f);
        print_header(run.config);
        if (simulate->parsed()) {
            print_coverage(run, 0.95);
            print_stability(run);
            print_regret(run);
        } else if (coverage->parsed()) {
            print_coverage(run, 0.0);
        } else if (stability->parsed()) {
            print_stability(run);
        } else if (regret->parsed()) {
            print_regret(run);
        }
        return 0;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kUsage;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "invalid setting: %s\n", e.what());
        return kUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
}
