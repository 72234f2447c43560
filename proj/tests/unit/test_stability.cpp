#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stablets/errors.hpp"
#include "stablets/normal.hpp"
#include "stablets/stability.hpp"

using namespace stablets;

namespace {

const BanditInstance kFour({{1, 1}, {1, 1}, {0.5, 1}, {0, 1}});
const BanditInstance kTwo({{1, 1}, {0, 1}});

// O(n^2) KS: at every sample x compare the reference with both F_n(x) and F_n(x-)
double brute_ks(const std::vector<double>& xs, double (*cdf)(double)) {
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) {
        double le = 0, lt = 0;
        for (double y : xs) {
            le += y <= x;
            lt += y < x;
        }
        d = std::max({d, std::fabs(le / n - cdf(x)), std::fabs(lt / n - cdf(x))});
    }
    return d;
}

double unit_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
double gauss_cdf(double x) { return normal_cdf(x); }

}  // namespace

TEST_CASE("theorem 1 normalizers") {
    const Policy stable = StableThompsonSampling{GammaSchedule(4, 0.4)};
    // (2 / 0.25) * gamma_T * log T with gamma_T = 4 (log 10^4)^0.4
    CHECK(theorem1_normalizer(kFour, stable, 10000, 2) == doctest::Approx(716.367591891822).epsilon(1e-12));
    CHECK(theorem1_normalizer(kFour, stable, 10000, 0) == 5000.0);
    CHECK(theorem1_normalizer(kFour, stable, 10000, 1) == 5000.0);
    CHECK(theorem1_normalizer(kTwo, ThompsonSampling{}, 10000, 1) ==
          doctest::Approx(18.420680743952367).epsilon(1e-12));
    CHECK(theorem1_normalizer(kTwo, ThompsonSampling{}, 10000, 0) == 10000.0);
}

TEST_CASE("normalizers outside the theorem are refused or flagged") {
    const BanditInstance three_best({{1, 1}, {1, 1}, {1, 1}, {0, 1}});
    const BanditInstance equal({{0, 1}, {0, 1}});
    CHECK_THROWS_AS(theorem1_normalizer(three_best, StableThompsonSampling{}, 10000, 0), UnsupportedByTheory);
    CHECK_THROWS_AS(theorem1_normalizer(equal, ThompsonSampling{}, 10000, 0), UnsupportedByTheory);
    CHECK_THROWS_AS(theorem1_normalizer(kTwo, UpperConfidenceBound{}, 10000, 0), UnsupportedByTheory);
    CHECK_THROWS_AS(theorem1_normalizer(kTwo, StableThompsonSampling{}, 2, 0), DomainError);

    const auto flagged = pull_normalizers(equal, ThompsonSampling{}, 10000);
    CHECK_FALSE(flagged[0].supported_by_theory);
    CHECK(flagged[0].value == 5000.0);
    const auto fine = pull_normalizers(kFour, StableThompsonSampling{}, 10000);
    for (const auto& n : fine) CHECK(n.supported_by_theory);
    CHECK(fine[3].value == doctest::Approx(716.367591891822 / 4));
}

TEST_CASE("normalizer monotonicity") {
    const double a = theorem1_normalizer(kTwo, StableThompsonSampling{GammaSchedule(4, 0.4)}, 10000, 1);
    const double b = theorem1_normalizer(kTwo, StableThompsonSampling{GammaSchedule(5, 0.4)}, 10000, 1);
    const double c = theorem1_normalizer(kTwo, StableThompsonSampling{GammaSchedule(4, 0.4)}, 100000, 1);
    CHECK(b > a);
    CHECK(c > a);
    CHECK(theorem1_normalizer(kTwo, StableThompsonSampling{GammaSchedule(5, 0.4)}, 10000, 0) ==
          theorem1_normalizer(kTwo, StableThompsonSampling{GammaSchedule(4, 0.4)}, 10000, 0));
}

TEST_CASE("normalized pull ratios") {
    std::vector<Trajectory> ts;
    for (std::uint64_t r = 0; r < 3; ++r) ts.push_back(run_episode(kTwo, ThompsonSampling{}, 100, 1, r));
    const auto samples = normalized_pull_ratios(ts, 1, 10.0);
    REQUIRE(samples.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(samples[i].replication == i);
        CHECK(samples[i].raw_count == ts[i].final_state.count(1));
        CHECK(samples[i].normalized == static_cast<double>(samples[i].raw_count) / 10.0);
    }
    const auto ones = normalized_pull_ratios(ts, 0, 1.0);
    for (const auto& s : ones) CHECK(s.normalized == static_cast<double>(s.raw_count));
    CHECK_THROWS_AS(normalized_pull_ratios(ts, 0, 0.0), DomainError);
}

TEST_CASE("concentration summary") {
    const std::vector<double> ones(5, 1.0);
    const auto c = concentration_summary(ones, 0.1);
    CHECK(c.mean == 1.0);
    CHECK(c.std_dev == 0.0);
    CHECK(c.fraction_within == 1.0);

    const std::vector<double> pair{0.9, 1.1};
    CHECK(concentration_summary(pair, 0.15).fraction_within == 1.0);
    CHECK(concentration_summary(pair, 0.05).fraction_within == 0.0);
    CHECK(concentration_summary(pair, 0.05).std_dev == doctest::Approx(std::sqrt(0.02)));
    CHECK_THROWS_AS(concentration_summary(std::vector<double>{1.0}, 0.1), DomainError);
    CHECK_THROWS_AS(concentration_summary(pair, 0.0), DomainError);
}

TEST_CASE("ks examples") {
    std::vector<double> q;
    for (int i = 1; i <= 999; ++i) q.push_back(i / 1000.0);
    CHECK(ks_statistic(q, ReferenceDistribution::Uniform01) < 0.002);

    const std::vector<double> point(20, 0.3);
    CHECK(ks_statistic(point, ReferenceDistribution::Uniform01) >= 0.5);

    RngStream rng(12, 0, StreamPurpose::Auxiliary);
    std::vector<double> z(10000);
    for (auto& x : z) x = rng.normal();
    CHECK(ks_statistic(z, ReferenceDistribution::StandardNormal) < 0.02);

    CHECK_THROWS_AS(ks_statistic(std::vector<double>(9, 0.5), ReferenceDistribution::Uniform01), DomainError);
}

TEST_CASE("ks agrees with a brute-force evaluation") {
    RngStream rng(13, 0, StreamPurpose::Auxiliary);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs(10 + trial * 7);
        for (auto& x : xs) x = trial % 2 ? rng.normal() : std::round(rng.uniform() * 8) / 8;  // ties on even trials
        CHECK(ks_statistic(xs, ReferenceDistribution::Uniform01) ==
              doctest::Approx(brute_ks(xs, unit_cdf)).epsilon(1e-12));
        CHECK(ks_statistic(xs, ReferenceDistribution::StandardNormal) ==
              doctest::Approx(brute_ks(xs, gauss_cdf)).epsilon(1e-12));
    }
}

TEST_CASE("ks properties") {
    RngStream rng(14, 0, StreamPurpose::Auxiliary);
    std::vector<double> xs(200);
    for (auto& x : xs) x = rng.uniform();
    const double d = ks_statistic(xs, ReferenceDistribution::Uniform01);
    CHECK(d >= 1.0 / (2.0 * xs.size()));
    CHECK(d <= 1.0);
    std::reverse(xs.begin(), xs.end());
    std::swap(xs[3], xs[150]);
    CHECK(ks_statistic(xs, ReferenceDistribution::Uniform01) == d);
}

TEST_CASE("ecdf") {
    const auto single = ecdf(std::vector<double>{3});
    REQUIRE(single.size() == 1);
    CHECK(single[0] == std::pair<double, double>{3, 1.0});

    const auto e = ecdf(std::vector<double>{2, 1, 2});
    REQUIRE(e.size() == 2);
    CHECK(e[0].first == 1);
    CHECK(e[0].second == doctest::Approx(1.0 / 3));
    CHECK(e[1] == std::pair<double, double>{2, 1.0});

    RngStream rng(15, 0, StreamPurpose::Auxiliary);
    std::vector<double> u(1000);
    for (auto& x : u) x = rng.uniform();
    double gap = 0;
    for (const auto& [x, f] : ecdf(u)) gap = std::max(gap, std::fabs(f - x));
    CHECK(gap < 0.06);
    CHECK_THROWS_AS(ecdf(std::vector<double>{}), DomainError);
}

TEST_CASE("histogram") {
    const std::vector<double> xs{0, 0.1, 0.5, 0.99, 1.0};
    const auto h = histogram(xs, 4);
    REQUIRE(h.size() == 4);
    CHECK(h.front().lo == 0.0);
    CHECK(h.back().hi == 1.0);
    CHECK(h[0].count == 2);
    CHECK(h[2].count == 1);
    CHECK(h[3].count == 2);

    const auto flat = histogram(std::vector<double>{2, 2, 2}, 5);
    CHECK(flat.front().lo == 1.5);
    CHECK(flat.back().hi == 2.5);
    std::uint64_t total = 0;
    for (const auto& b : flat) total += b.count;
    CHECK(total == 3);
    CHECK_THROWS_AS(histogram(xs, 0), DomainError);
}
