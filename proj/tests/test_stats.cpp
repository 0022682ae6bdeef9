#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "qproc/stats.hpp"

using namespace qproc;

TEST_CASE("wilson interval at zero successes") {
    const ConfidenceInterval ci = wilson_interval(0, 10, 1.96);
    CHECK_THAT(ci.low, Catch::Matchers::WithinAbs(0.0, 1e-12));
    const double z2 = 1.96 * 1.96;
    CHECK_THAT(ci.high, Catch::Matchers::WithinAbs(z2 / (10.0 + z2), 1e-12));
}

TEST_CASE("wilson interval is symmetric about 1/2 at s = n/2") {
    const ConfidenceInterval ci = wilson_interval(5, 10, 1.96);
    CHECK_THAT(ci.low + ci.high, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("wilson interval success/failure exchange symmetry") {
    for (std::uint64_t s : {0ull, 1ull, 3ull, 7ull, 10ull}) {
        const ConfidenceInterval a = wilson_interval(s, 10, 1.96);
        const ConfidenceInterval b = wilson_interval(10 - s, 10, 1.96);
        CHECK_THAT(a.low, Catch::Matchers::WithinAbs(1.0 - b.high, 1e-12));
        CHECK_THAT(a.high, Catch::Matchers::WithinAbs(1.0 - b.low, 1e-12));
    }
}

TEST_CASE("wilson interval contains p_hat and stays in [0,1]") {
    for (std::uint64_t n : {1ull, 7ull, 100ull, 5000ull})
        for (std::uint64_t s = 0; s <= n; s += std::max<std::uint64_t>(1, n / 7)) {
            const ConfidenceInterval ci = wilson_interval(s, n, 1.96);
            const double p_hat = static_cast<double>(s) / static_cast<double>(n);
            REQUIRE(ci.low >= 0.0);
            REQUIRE(ci.high <= 1.0);
            REQUIRE(ci.low <= p_hat + 1e-12);
            REQUIRE(ci.high >= p_hat - 1e-12);
        }
}

TEST_CASE("wilson interval validation") {
    CHECK_THROWS_AS(wilson_interval(1, 0, 1.96), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(11, 10, 1.96), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(1, 10, 0.0), std::invalid_argument);
}

TEST_CASE("chi-square statistic") {
    const std::vector<std::uint64_t> equal{50, 50};
    const std::vector<double> expected{50.0, 50.0};
    CHECK(chi_square_statistic(equal, expected) == 0.0);

    const std::vector<std::uint64_t> off{55, 45};
    CHECK_THAT(chi_square_statistic(off, expected), Catch::Matchers::WithinAbs(1.0, 1e-12));

    const std::vector<double> bad{50.0, 0.0};
    CHECK_THROWS_AS(chi_square_statistic(off, bad), std::invalid_argument);
    const std::vector<double> short_exp{50.0};
    CHECK_THROWS_AS(chi_square_statistic(off, short_exp), std::invalid_argument);
}

TEST_CASE("chi-square critical table spot checks") {
    CHECK_THAT(chi_square_critical(1, 0.01), Catch::Matchers::WithinAbs(6.6348966010, 1e-9));
    CHECK_THAT(chi_square_critical(3, 0.001), Catch::Matchers::WithinAbs(16.2662361962, 1e-9));
    CHECK_THAT(chi_square_critical(12, 0.001), Catch::Matchers::WithinAbs(32.9094904074, 1e-9));
    CHECK_THROWS_AS(chi_square_critical(0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(chi_square_critical(65, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(chi_square_critical(5, 0.05), std::invalid_argument);
}

TEST_CASE("mc_estimate on constant predicates") {
    const MCEstimate always = mc_estimate([](RngStream&) { return true; }, 100, 1, "t", 1);
    CHECK(always.successes == 100);
    CHECK(always.p_hat == 1.0);
    const MCEstimate never = mc_estimate([](RngStream&) { return false; }, 100, 1, "f", 1);
    CHECK(never.successes == 0);
    CHECK(never.p_hat == 0.0);
}

TEST_CASE("mc_estimate is identical across worker counts") {
    auto trial = [](RngStream& rng) { return rng.next_double() < 0.37; };
    const MCEstimate w1 = mc_estimate(trial, 10001, 99, "workers", 1);
    const MCEstimate w2 = mc_estimate(trial, 10001, 99, "workers", 2);
    const MCEstimate w8 = mc_estimate(trial, 10001, 99, "workers", 8);
    CHECK(w1.successes == w2.successes);
    CHECK(w1.successes == w8.successes);
    CHECK(w1.p_hat == w8.p_hat);
    CHECK(w1.ci_low == w8.ci_low);
    CHECK(w1.ci_high == w8.ci_high);
}

TEST_CASE("mc_collect returns an index-ordered buffer under any worker count") {
    auto trial = [](RngStream& rng) { return rng.index(); };
    const auto one = mc_collect<std::uint64_t>(trial, 5000, 5, "collect", 1);
    const auto eight = mc_collect<std::uint64_t>(trial, 5000, 5, "collect", 8);
    REQUIRE(one.size() == 5000);
    REQUIRE(one == eight);
    for (std::uint64_t i = 0; i < one.size(); ++i) REQUIRE(one[i] == i);
}

TEST_CASE("a throwing trial aborts the estimate with its index") {
    auto trial = [](RngStream& rng) {
        if (rng.index() == 3) throw std::runtime_error("boom");
        return true;
    };
    CHECK_THROWS_WITH(mc_estimate(trial, 10, 1, "abort", 1),
                      Catch::Matchers::ContainsSubstring("trial 3"));
    CHECK_THROWS_WITH(mc_estimate(trial, 10, 1, "abort", 4),
                      Catch::Matchers::ContainsSubstring("trial 3"));
}

TEST_CASE("95% wilson coverage for Bernoulli(0.3) is at least 90% over meta-trials") {
    int covered = 0;
    for (int meta = 0; meta < 200; ++meta) {
        const std::string label = "coverage-" + std::to_string(meta);
        const MCEstimate est = mc_estimate(
            [](RngStream& rng) { return rng.next_double() < 0.3; }, 500, 2718, label, 1);
        if (est.ci_low <= 0.3 && 0.3 <= est.ci_high) ++covered;
    }
    CHECK(covered >= 180);
}

TEST_CASE("domination check in the degenerate all-zero regime") {
    const std::vector<std::uint64_t> zeros(100, 0);
    const DominationResult result = domination_check(zeros, 16, 0.0, 0.0);
    CHECK(result.passed);
    CHECK(result.worst_gap <= 0.0);
}

TEST_CASE("domination check quantifies the worst offending point") {
    const std::vector<std::uint64_t> samples{0, 0, 0, 1};
    // Empirical CDF(0) = 0.75 vs Binomial(1, 0.5) CDF(0) = 0.5.
    const DominationResult fail = domination_check(samples, 1, 0.5, 0.2);
    CHECK_FALSE(fail.passed);
    CHECK(fail.worst_t == 0);
    CHECK_THAT(fail.worst_gap, Catch::Matchers::WithinAbs(0.25, 1e-12));
    const DominationResult pass = domination_check(samples, 1, 0.5, 0.3);
    CHECK(pass.passed);
}

TEST_CASE("domination check validation") {
    const std::vector<std::uint64_t> empty;
    CHECK_THROWS_AS(domination_check(empty, 4, 0.5, 0.0), std::invalid_argument);
    const std::vector<std::uint64_t> one{0};
    CHECK_THROWS_AS(domination_check(one, 4, 0.5, -0.1), std::invalid_argument);
}
