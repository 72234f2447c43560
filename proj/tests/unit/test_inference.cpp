#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "stablets/errors.hpp"
#include "stablets/inference.hpp"
#include "stablets/stability.hpp"
#include "stablets/summary.hpp"

using namespace stablets;

TEST_CASE("arm estimates") {
    PolicyState s(2);
    s.update(0, 7);
    for (double x : {1.0, 2.0, 3.0}) s.update(1, x);
    const auto one = arm_estimate(s, 0);
    CHECK(one.n == 1);
    CHECK(one.mean == 7.0);
    CHECK_FALSE(one.sample_std.has_value());
    const auto three = arm_estimate(s, 1);
    CHECK(three.n == 3);
    CHECK(three.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(*three.sample_std == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("arm estimates from a four-arm run") {
    const BanditInstance inst({{1, 1}, {1, 1}, {0.5, 1}, {0, 1}});
    const auto traj = run_episode(inst, StableThompsonSampling{}, 10000, 1, 0);
    const auto est = arm_estimates(traj);
    REQUIRE(est.size() == 4);
    std::uint64_t n = 0;
    std::vector<double> sums(4, 0.0);
    for (const auto& st : traj.steps) sums[st.arm] += st.reward;
    for (const auto& e : est) {
        n += e.n;
        CHECK(e.mean == doctest::Approx(sums[e.arm] / e.n).epsilon(1e-12));
    }
    CHECK(n == 10000);
}

TEST_CASE("confidence interval examples") {
    const ArmEstimate e{0, 100, 0.0, 1.0};
    const auto ci = confidence_interval(e, 0.05);
    CHECK(std::fabs(ci.lower + 0.19600) < 1e-5);
    CHECK(std::fabs(ci.upper - 0.19600) < 1e-5);
    CHECK(ci.level == doctest::Approx(0.95));

    const auto flat = confidence_interval(ArmEstimate{0, 10, 3.5, 0.0}, 0.1);
    CHECK(flat.lower == 3.5);
    CHECK(flat.upper == 3.5);

    CHECK(confidence_interval(e, 0.999999).half_width() < 1e-4);

    CHECK_THROWS_AS(confidence_interval(ArmEstimate{0, 1, 0.0, std::nullopt}, 0.05), InsufficientDataError);
    CHECK_THROWS_AS(confidence_interval(e, 0.0), DomainError);
    CHECK_THROWS_AS(confidence_interval(e, 1.0), DomainError);
}

TEST_CASE("intervals are symmetric and nested") {
    RngStream rng(4, 0, StreamPurpose::Auxiliary);
    const auto grid = default_alpha_grid();
    for (int i = 0; i < 500; ++i) {
        const ArmEstimate e{0, 2 + static_cast<std::uint64_t>(rng.uniform() * 1000), 10 * rng.normal(),
                            3 * rng.uniform()};
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto ci = confidence_interval(e, grid[g]);
            CHECK(std::fabs((ci.upper - e.mean) - (e.mean - ci.lower)) < 1e-12);
            if (g + 1 < grid.size()) {
                // grid runs from alpha 0.25 down to 0.01, so later intervals are wider
                const auto wider = confidence_interval(e, grid[g + 1]);
                CHECK(wider.lower <= ci.lower);
                CHECK(wider.upper >= ci.upper);
            }
        }
    }
}

TEST_CASE("standardized error") {
    CHECK(standardized_error(ArmEstimate{0, 4, 1.5, 1.0}, 1.5) == 0.0);
    CHECK(standardized_error(ArmEstimate{0, 4, 1.5, 1.0}, 1.0) == doctest::Approx(1.0));
    CHECK(standardized_error(ArmEstimate{0, 9, 0.0, 2.0}, 1.0) < 0.0);
    CHECK_THROWS_AS(standardized_error(ArmEstimate{0, 4, 1.5, 0.0}, 1.0), DegenerateError);
    CHECK_THROWS_AS(standardized_error(ArmEstimate{0, 1, 1.5, std::nullopt}, 1.0), InsufficientDataError);
}

TEST_CASE("standardized errors of i.i.d. samples are close to N(0,1)") {
    RngStream rng(21, 0, StreamPurpose::Auxiliary);
    std::vector<double> errs;
    for (int r = 0; r < 10000; ++r) {
        PolicyState s(1);
        for (int i = 0; i < 100; ++i) s.update(0, rng.normal());
        errs.push_back(standardized_error(arm_estimate(s, 0), 0.0));
    }
    // the t(99) law of these statistics is itself within ~0.003 of N(0,1)
    CHECK(ks_statistic(errs, ReferenceDistribution::StandardNormal) < 0.02);
}

TEST_CASE("default alpha grid") {
    const auto g = default_alpha_grid();
    REQUIRE(g.size() == 25);
    CHECK(g.front() == 0.25);
    CHECK(g.back() == 0.01);
    CHECK(g[20] == 0.05);
}

namespace {

ReplicationSummary stub(std::uint64_t rep, std::vector<double> alphas, std::vector<std::optional<ConfidenceInterval>> cis) {
    ReplicationSummary s;
    s.replication = rep;
    s.alphas = alphas;
    for (ArmId a = 0; a < 2; ++a) {
        ArmSummary arm;
        arm.arm = a;
        arm.intervals = cis;
        arm.covered.assign(cis.size(), false);
        s.arms.push_back(arm);
    }
    return s;
}

}  // namespace

TEST_CASE("coverage of infinite intervals is one") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> alphas{0.1, 0.05};
    std::vector<std::optional<ConfidenceInterval>> cis{ConfidenceInterval{0, 0.9, -inf, inf},
                                                       ConfidenceInterval{0, 0.95, -inf, inf}};
    std::vector<ReplicationSummary> reps{stub(0, alphas, cis), stub(1, alphas, cis), stub(2, alphas, cis)};
    const BanditInstance inst({{1, 1}, {0, 1}});
    const auto rows = coverage_curve(reps, inst, alphas);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.coverage == 1.0);
        CHECK(r.standard_error == 0.0);
    }
    CHECK(rows[1].level == doctest::Approx(0.95));
    CHECK_THROWS_AS(coverage_curve(reps, inst, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(coverage_curve(std::vector<ReplicationSummary>{}, inst, alphas), DomainError);
    CHECK_THROWS_AS(coverage_curve(reps, inst, std::vector<double>{0.2}), DomainError);
}

TEST_CASE("missing intervals count as not covered") {
    const std::vector<double> alphas{0.05};
    std::vector<ReplicationSummary> reps{stub(0, alphas, {std::nullopt}),
                                         stub(1, alphas, {ConfidenceInterval{0, 0.95, -5, 5}})};
    const auto rows = coverage_curve(reps, BanditInstance({{1, 1}, {0, 1}}), alphas);
    CHECK(rows[0].coverage == 0.5);
    CHECK(rows[0].standard_error == doctest::Approx(std::sqrt(0.25 / 2)));
}

TEST_CASE("coverage is invariant under permutation") {
    const BanditInstance inst({{1, 1}, {0, 1}});
    const auto alphas = default_alpha_grid();
    const std::vector<double> norms{100.0, 10.0};
    std::vector<ReplicationSummary> reps;
    for (std::uint64_t r = 0; r < 40; ++r) {
        reps.push_back(summarize_replication(run_episode(inst, StableThompsonSampling{}, 200, 3, r), alphas, norms));
    }
    const auto a = coverage_curve(reps, inst, alphas);
    std::reverse(reps.begin(), reps.end());
    std::rotate(reps.begin(), reps.begin() + 13, reps.end());
    const auto b = coverage_curve(reps, inst, alphas);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coverage == b[i].coverage);
}
