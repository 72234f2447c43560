#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "stablets/config.hpp"
#include "stablets/errors.hpp"
#include "stablets/experiment.hpp"
#include "stablets/normal.hpp"
#include "stablets/output.hpp"
#include "stablets/presets.hpp"
#include "stablets/theory.hpp"
#include "stablets/verification.hpp"

namespace py = pybind11;
using namespace stablets;

namespace {

BanditInstance make_instance(const std::vector<double>& means, std::optional<std::vector<double>> variances) {
    std::vector<ArmSpec> arms;
    for (std::size_t k = 0; k < means.size(); ++k) {
        const double v = variances ? variances->at(k) : 1.0;
        arms.push_back({means[k], v});
    }
    if (variances && variances->size() != means.size()) throw DomainError("means and variances differ in length");
    return BanditInstance(std::move(arms));
}

Policy make_policy(const std::string& name, double coefficient, double exponent) {
    if (name == "ts") return ThompsonSampling{};
    if (name == "ucb") return UpperConfidenceBound{};
    if (name == "stable_ts") return StableThompsonSampling{GammaSchedule(coefficient, exponent)};
    throw DomainError("policy must be ts, stable_ts or ucb");
}

ReferenceDistribution reference_from(const std::string& name) {
    if (name == "normal") return ReferenceDistribution::StandardNormal;
    if (name == "uniform") return ReferenceDistribution::Uniform01;
    throw DomainError("reference must be 'normal' or 'uniform'");
}

py::dict episode_dict(const Trajectory& t) {
    std::vector<std::uint64_t> rounds, arms;
    std::vector<double> rewards;
    for (const auto& s : t.steps) {
        rounds.push_back(s.round);
        arms.push_back(s.arm);
        rewards.push_back(s.reward);
    }
    py::dict d;
    d["counts"] = std::vector<std::uint64_t>(t.final_state.counts().begin(), t.final_state.counts().end());
    d["means"] = std::vector<double>(t.final_state.means().begin(), t.final_state.means().end());
    d["rounds"] = rounds;
    d["arms"] = arms;
    d["rewards"] = rewards;
    return d;
}

py::dict experiment_dict(const ExperimentConfig& config, const std::vector<ReplicationSummary>& runs) {
    py::list pulls, means, errors;
    for (const auto& s : runs) {
        std::vector<std::uint64_t> n;
        std::vector<double> m;
        std::vector<std::optional<double>> e;
        for (const auto& a : s.arms) {
            n.push_back(a.n);
            m.push_back(a.mean);
            e.push_back(a.standardized_error);
        }
        pulls.append(n);
        means.append(m);
        errors.append(e);
    }
    py::list coverage;
    for (const auto& row : coverage_curve(runs, config.instance, config.alpha_grid())) {
        py::dict r;
        r["arm"] = row.arm;
        r["level"] = row.level;
        r["coverage"] = row.coverage;
        r["stderr"] = row.standard_error;
        coverage.append(r);
    }
    py::dict d;
    d["policy"] = policy_name(config.policy);
    d["horizon"] = config.horizon;
    d["replications"] = config.replications;
    d["seed"] = config.master_seed;
    d["pulls"] = pulls;
    d["means"] = means;
    d["standardized_errors"] = errors;
    d["coverage"] = coverage;
    d["replication_csv"] = replication_csv(runs);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Thompson sampling and stable Thompson sampling simulation core";
    const auto version = version_string();
    m.attr("__version__") = version.substr(version.rfind(' ') + 1);

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("normal_cdf", &normal_cdf, py::arg("z"));
    m.def("normal_quantile", &normal_quantile, py::arg("p"));
    m.def("gamma_value", [](std::uint64_t horizon, double coefficient, double exponent) {
        return gamma_value(GammaSchedule(coefficient, exponent), horizon);
    }, py::arg("horizon"), py::arg("coefficient") = 4.0, py::arg("exponent") = 0.4);
    m.def("selection_probability", &selection_probability_closed_form, py::arg("delta_hat"), py::arg("n1"),
          py::arg("n2"), py::arg("t"), py::arg("gamma"));
    m.def("expected_pulls_bound", &expected_pulls_bound, py::arg("horizon"), py::arg("gap"), py::arg("gamma"));
    m.def("lil_envelope", &lil_envelope, py::arg("n"), py::arg("horizon"));
    m.def("mills_ratio_bounds", [](double z) {
        const auto b = mills_ratio_bounds(z);
        return py::make_tuple(b.lower, b.exact_tail, b.upper);
    }, py::arg("z"));
    m.def("ks_statistic", [](const std::vector<double>& samples, const std::string& reference) {
        return ks_statistic(samples, reference_from(reference));
    }, py::arg("samples"), py::arg("reference") = "normal");

    m.def("run_episode", [](const std::vector<double>& means, std::optional<std::vector<double>> variances,
                            const std::string& policy, std::uint64_t horizon, std::uint64_t seed,
                            std::uint64_t replication, double coefficient, double exponent) {
        const auto instance = make_instance(means, std::move(variances));
        const auto traj = run_episode(instance, make_policy(policy, coefficient, exponent), horizon, seed, replication);
        return episode_dict(traj);
    }, py::arg("means"), py::arg("variances") = py::none(), py::arg("policy") = "stable_ts",
       py::arg("horizon") = 10000, py::arg("seed") = kDefaultSeed, py::arg("replication") = 0,
       py::arg("gamma_coefficient") = 4.0, py::arg("gamma_exponent") = 0.4);

    m.def("simulate", [](const std::string& config_text, std::optional<std::uint64_t> replications,
                         std::optional<std::uint64_t> horizon, std::optional<std::uint64_t> seed, unsigned workers) {
        auto config = parse_config(config_text);
        RunOverrides ov;
        ov.replications = replications;
        ov.horizon = horizon;
        ov.seed = seed;
        ov.workers = workers;
        apply_overrides(config, ov);
        std::vector<ReplicationSummary> runs;
        {
            py::gil_scoped_release release;
            runs = run_experiment(config);
        }
        return experiment_dict(config, runs);
    }, py::arg("config"), py::arg("replications") = py::none(), py::arg("horizon") = py::none(),
       py::arg("seed") = py::none(), py::arg("workers") = 0,
       "Runs the experiment described by config text (the same format the CLI reads).");

    m.def("verify_theory", [](std::uint64_t seed, std::uint64_t horizon, std::uint64_t lil_replications,
                              std::uint64_t sandwich_replications, unsigned workers) {
        VerificationOptions opts;
        opts.seed = seed;
        opts.horizon = horizon;
        opts.lil_replications = lil_replications;
        opts.sandwich_replications = sandwich_replications;
        opts.workers = workers;
        std::vector<CheckResult> checks;
        {
            py::gil_scoped_release release;
            checks = verify_theory(opts);
        }
        py::list out;
        for (const auto& c : checks) {
            py::dict d;
            d["name"] = c.name;
            d["statistic"] = c.statistic;
            d["threshold"] = c.threshold;
            d["verdict"] = std::string(to_string(c.verdict));
            d["detail"] = c.detail;
            out.append(d);
        }
        return out;
    }, py::arg("seed") = kDefaultSeed, py::arg("horizon") = 10000, py::arg("lil_replications") = 1000,
       py::arg("sandwich_replications") = 100, py::arg("workers") = 0);

    m.def("reproduce_figure", [](int figure, const std::filesystem::path& out_dir,
                                 std::optional<std::uint64_t> replications, std::optional<std::uint64_t> horizon,
                                 std::optional<std::uint64_t> seed, bool full) {
        RunOverrides ov;
        ov.replications = replications;
        ov.horizon = horizon;
        ov.seed = seed;
        ov.full = full;
        std::filesystem::create_directories(out_dir);
        FigureReport report;
        {
            py::gil_scoped_release release;
            report = reproduce_figure(figure, ov, out_dir);
        }
        py::dict d;
        d["figure"] = report.figure;
        d["files"] = report.files;
        d["lines"] = report.lines;
        return d;
    }, py::arg("figure"), py::arg("out_dir"), py::arg("replications") = py::none(), py::arg("horizon") = py::none(),
       py::arg("seed") = py::none(), py::arg("full") = false);
}
