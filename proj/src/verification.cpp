#include "stablets/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stablets/experiment.hpp"
#include "stablets/normal.hpp"
#include "stablets/output.hpp"
#include "stablets/theory.hpp"

namespace stablets {

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Info: return "INFO";
    }
    return "INFO";
}

namespace {

// replication indices reserved for the auxiliary streams of each check
constexpr std::uint64_t kMillsStream = 1u << 20;
constexpr std::uint64_t kLseStream = kMillsStream + 1;
constexpr std::uint64_t kGeometricStream = kMillsStream + 16;
constexpr std::uint64_t kCoupledStream = kMillsStream + 32;
constexpr std::uint64_t kSelectionStream = kMillsStream + 64;

CheckResult at_most(std::string name, double statistic, double threshold, std::string detail = {}) {
    return {std::move(name), statistic, threshold, statistic <= threshold ? Verdict::Pass : Verdict::Fail,
            std::move(detail)};
}

CheckResult at_least(std::string name, double statistic, double threshold, std::string detail = {}) {
    return {std::move(name), statistic, threshold, statistic >= threshold ? Verdict::Pass : Verdict::Fail,
            std::move(detail)};
}

CheckResult mills_ratio_check(std::uint64_t seed) {
    RngStream rng(seed, kMillsStream, StreamPurpose::Auxiliary);
    std::uint64_t violations = 0;
    auto check = [&](double z) {
        const auto b = mills_ratio_bounds(z);
        if (!(b.lower <= b.exact_tail && b.exact_tail <= b.upper)) ++violations;
    };
    for (int i = 0; i < 10000; ++i) check(10.0 * (1.0 - rng.uniform()));
    for (int i = 1; i <= 1000; ++i) check(0.01 * i);
    return at_most("mills_ratio_bracket", static_cast<double>(violations), 0.0,
                   "violations over 10^4 random z in (0,10] and the grid 0.01..10");
}

CheckResult log_sum_exp_check(std::uint64_t seed) {
    RngStream rng(seed, kLseStream, StreamPurpose::Auxiliary);
    std::uint64_t violations = 0;
    std::vector<double> v;
    for (int i = 0; i < 10000; ++i) {
        const auto n = 1 + static_cast<std::size_t>(rng.uniform() * 64.0);
        const double scale = std::pow(10.0, 6.0 * rng.uniform());
        v.resize(n);
        for (auto& x : v) x = scale * rng.normal();
        const auto b = log_sum_exp_bounds(v);
        if (!std::isfinite(b.lse) || !(b.max <= b.lse && b.lse <= b.upper)) ++violations;
    }
    return at_most("log_sum_exp_bracket", static_cast<double>(violations), 0.0,
                   "violations over 10^4 random vectors, entries up to ~10^6");
}

std::vector<CheckResult> geometric_mean_checks(std::uint64_t seed, unsigned workers) {
    const std::vector<double> ps{0.9, 0.5, 0.1, 0.01};
    constexpr int kDraws = 100000;
    return parallel_replications(ps.size(), workers, [&](std::uint64_t i) {
        const double p = ps[i];
        RngStream rng(seed, kGeometricStream + i, StreamPurpose::Auxiliary);
        double sum = 0.0;
        for (int d = 0; d < kDraws; ++d) sum += static_cast<double>(sample_proxy_waiting_time(p, rng));
        const double mean = sum / kDraws;
        const double se = std::sqrt((1.0 - p) / (p * p) / kDraws);
        char name[64];
        std::snprintf(name, sizeof name, "geometric_mean_identity_p%g", p);
        return at_most(name, std::fabs(mean - 1.0 / p) / se, 3.0,
                       "|mean - 1/p| in standard errors, mean " + format_number(mean) + " over 10^5 draws");
    });
}

CheckResult proxy_bracket_check() {
    std::uint64_t violations = 0;
    std::uint64_t cases = 0;
    for (double gap : {0.25, 0.5, 1.0, 2.0}) {
        for (double gamma : {1.0, 4.0, 9.7228, 50.0}) {
            for (double frac : {0.01, 0.5, 0.99}) {
                const double eps = frac * gap * gap / 2.0;
                for (std::uint64_t j = 0; j <= 1000; ++j) {
                    const ProxyParams params{gap, gamma, j, eps};
                    const double p = proxy_success_prob(params);
                    const auto b = proxy_success_prob_bounds(params);
                    if (!(b.plus <= p && p <= std::min(1.0, b.minus))) ++violations;
                    ++cases;
                }
            }
        }
    }
    return at_most("proxy_bracket", static_cast<double>(violations), 0.0,
                   "violations of p+ <= p <= min(1, p-) over " + std::to_string(cases) + " (gap, gamma, eps, j) cases");
}

CheckResult coupled_proxy_check(std::uint64_t seed) {
    RngStream rng(seed, kCoupledStream, StreamPurpose::Auxiliary);
    std::uint64_t violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const double gap = 0.25 + 1.75 * rng.uniform();
        const double gamma = 1.0 + 49.0 * rng.uniform();
        const double eps = (0.05 + 0.9 * rng.uniform()) * gap * gap / 2.0;
        // keep p+ above 1e-3 so the plus waiting time stays short
        const double j_max = std::log(1000.0) * gamma / (gap * gap / 2.0 + eps);
        const auto j = static_cast<std::uint64_t>(std::min(1000.0, j_max) * rng.uniform());
        const auto w = sample_coupled_waiting_times({gap, gamma, j, eps}, rng);
        if (!(w.minus <= w.proxy && w.proxy <= w.plus)) ++violations;
    }
    return at_most("coupled_proxy_ordering", static_cast<double>(violations), 0.0,
                   "violations of minus <= proxy <= plus over 10^4 coupled draws");
}

CheckResult selection_probability_check(std::uint64_t seed, unsigned workers) {
    constexpr int kStates = 20;
    constexpr int kDraws = 100000;
    const auto passed = parallel_replications(kStates, workers, [&](std::uint64_t s) {
        RngStream aux(seed, kSelectionStream + s, StreamPurpose::Auxiliary);
        RngStream post(seed, kSelectionStream + s, StreamPurpose::PosteriorNoise);
        const auto n1 = 2 + static_cast<std::uint64_t>(aux.uniform() * 499.0);
        const auto n2 = 2 + static_cast<std::uint64_t>(aux.uniform() * 499.0);
        const double gamma = 1.0 + 9.0 * aux.uniform();
        const double m1 = 0.3 * aux.normal();
        const double m2 = 0.3 * aux.normal();
        const auto state = PolicyState::from_statistics({n1, n2}, {m1, m2});
        std::uint64_t first = 0;
        for (int d = 0; d < kDraws; ++d) first += stable_ts_select(state, gamma, post) == 0 ? 1 : 0;
        const double freq = static_cast<double>(first) / kDraws;
        const double p = selection_probability_closed_form(m1 - m2, n1, n2, n1 + n2, gamma);
        const double se = std::sqrt(p * (1.0 - p) / kDraws);
        return std::fabs(freq - p) <= 3.0 * se + 1e-12 ? 1 : 0;
    });
    double count = 0;
    for (int ok : passed) count += ok;
    return at_least("selection_probability_monte_carlo", count, 19.0,
                    "states (of 20) whose 10^5-draw frequency is within 3 SE of the closed form");
}

CheckResult complementarity_check() {
    double worst = 0.0;
    for (int i = -200; i <= 200; ++i) {
        const double x = 0.05 * i;
        for (std::uint64_t n1 : {2u, 17u, 400u}) {
            for (std::uint64_t n2 : {3u, 50u, 1000u}) {
                for (double gamma : {1.0, 9.7228}) {
                    const double a = selection_probability_closed_form(x, n1, n2, n1 + n2, gamma);
                    const double b = selection_probability_closed_form(-x, n1, n2, n1 + n2, gamma);
                    worst = std::max(worst, std::fabs(a + b - 1.0));
                }
            }
        }
    }
    return at_most("selection_probability_complementarity", worst, 1e-12, "max |p(x) + p(-x) - 1|");
}

CheckResult gamma_condition_check() {
    // gamma / loglog T for 4 (log T)^0.4 bottoms out near log T = e^2.5 (T ~ 2e5)
    const std::vector<std::uint64_t> horizons{1000000, 10000000, 100000000, 1000000000, 10000000000ull,
                                              100000000000ull, 1000000000000ull};
    const auto report = check_gamma_condition(GammaSchedule(4.0, 0.4), horizons);
    return at_least("gamma_growth_condition", report.passed() ? 1.0 : 0.0, 1.0,
                    "gamma/loglog T and sqrt(log T)/gamma increasing over T = 10^6..10^12 for 4 (log T)^0.4");
}

struct EventTally {
    bool ordered = true;
    bool censored = false;
    HighProbabilityEvents events;
};

std::vector<CheckResult> trajectory_checks(const VerificationOptions& options) {
    std::vector<CheckResult> out;
    const auto horizon = options.horizon;
    const double log_t = std::log(static_cast<double>(horizon));

    // sandwich ordering and E1-E3 on stable TS with means (1, 0)
    const BanditInstance unequal({{1.0, 1.0}, {0.0, 1.0}});
    const Policy stable = StableThompsonSampling{GammaSchedule(4.0, 0.4)};
    const double gamma = *policy_gamma(stable, horizon);
    EpisodeOptions cont;
    cont.continue_until_pull = 1;
    const auto tallies = parallel_replications(options.sandwich_replications, options.workers, [&](std::uint64_t r) {
        const auto traj = run_episode(unequal, stable, horizon, options.seed, r, cont);
        EventTally t;
        try {
            t.censored = sandwich_statistic(traj, 1, gamma).censored;
        } catch (const std::logic_error&) {
            t.ordered = false;
        }
        t.events = high_probability_events(traj, 1);
        return t;
    });
    double violations = 0, censored = 0, e1 = 0, e2 = 0, e3 = 0, caps = 0;
    for (const auto& t : tallies) {
        violations += t.ordered ? 0 : 1;
        censored += t.censored ? 1 : 0;
        e1 += t.events.e1;
        e2 += t.events.e2;
        e3 += t.events.e3;
        caps += t.events.cap_hit;
    }
    const double reps = static_cast<double>(tallies.size());
    out.push_back(at_most("sandwich_ordering", violations, 0.0,
                          "trajectories violating lower <= point <= upper; censored " + format_number(censored)));
    out.push_back({"event_e1_frequency", e1 / reps, 0.0, Verdict::Info, "n_T >= log T / (2 gap^2), stable TS means (1,0)"});
    out.push_back({"event_e2_frequency", e2 / reps, 0.0, Verdict::Info, "n_t >= sqrt(log T) / (4 gap^2) on the late window"});
    out.push_back({"event_e3_frequency", e3 / reps, 0.0, Verdict::Info, "n_t <= (log T)^2 on the late window"});
    out.push_back({"continuation_cap_hits", caps, 0.0, Verdict::Info, "continuations censored at 100 T"});

    // E4 on standard TS with equal means
    const BanditInstance equal({{0.0, 1.0}, {0.0, 1.0}});
    EpisodeOptions plain;
    const auto held = parallel_replications(options.lil_replications, options.workers, [&](std::uint64_t r) {
        return lil_event_holds(run_episode(equal, ThompsonSampling{}, horizon, options.seed, r, plain)) ? 1 : 0;
    });
    double count = 0;
    for (int h : held) count += h;
    out.push_back(at_least("lil_event_frequency", count / static_cast<double>(held.size()), 1.0 - 2.0 / log_t,
                           "standard TS, two equal N(0,1) arms, both arms inside the LIL envelope for all t"));
    return out;
}

}  // namespace

std::vector<CheckResult> verify_theory(const VerificationOptions& options) {
    std::vector<CheckResult> out;
    out.push_back(mills_ratio_check(options.seed));
    out.push_back(log_sum_exp_check(options.seed));
    for (auto& c : geometric_mean_checks(options.seed, options.workers)) out.push_back(std::move(c));
    out.push_back(proxy_bracket_check());
    out.push_back(coupled_proxy_check(options.seed));
    out.push_back(selection_probability_check(options.seed, options.workers));
    out.push_back(complementarity_check());
    out.push_back(gamma_condition_check());
    for (auto& c : trajectory_checks(options)) out.push_back(std::move(c));
    return out;
}

bool all_passed(const std::vector<CheckResult>& checks) noexcept {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.verdict == Verdict::Fail; });
}

std::string verification_json(const std::vector<CheckResult>& checks) {
    using nlohmann::ordered_json;
    auto rows = ordered_json::array();
    auto number = [](double v) -> ordered_json {
        if (!std::isfinite(v)) return nullptr;
        return std::strtod(format_number(v).c_str(), nullptr);
    };
    for (const auto& c : checks) {
        rows.push_back(ordered_json{{"name", c.name},
                                    {"statistic", number(c.statistic)},
                                    {"threshold", number(c.threshold)},
                                    {"verdict", std::string(to_string(c.verdict))},
                                    {"detail", c.detail}});
    }
    ordered_json j;
    j["version"] = version_string();
    j["checks"] = std::move(rows);
    j["passed"] = all_passed(checks);
    return j.dump(2) + "\n";
}

std::string verification_text(const std::vector<CheckResult>& checks) {
    std::size_t width = 5;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %14s  %14s  %s\n", static_cast<int>(width), "check", "statistic", "threshold",
                  "verdict");
    out << line;
    for (const auto& c : checks) {
        const auto threshold = c.verdict == Verdict::Info ? std::string("-") : format_number(c.threshold);
        std::snprintf(line, sizeof line, "%-*s  %14s  %14s  %s\n", static_cast<int>(width), c.name.c_str(),
                      format_number(c.statistic).c_str(), threshold.c_str(), std::string(to_string(c.verdict)).c_str());
        out << line;
    }
    out << (all_passed(checks) ? "all checks passed\n" : "some checks failed\n");
    return out.str();
}

}  // namespace stablets
