#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "qproc/hitting.hpp"
#include "qproc/oracle.hpp"

using namespace qproc;

TEST_CASE("single edge at d=1: both hitting times are 1") {
    const CubeSpec spec = make_cube(1);
    const ProcessTrace trace = run_process(spec, ProcessOrder{spec, {0}});
    CHECK(trace.tau_d == 1);
    CHECK(trace.tau_c == 1);
}

TEST_CASE("d=2 hand-checked order: opposite edges first") {
    const CubeSpec spec = make_cube(2);
    // Edges 0 = {0,1} and 1 = {2,3} are a perfect matching of the 4-cycle.
    const ProcessTrace trace = run_process(spec, ProcessOrder{spec, {0, 1, 2, 3}});
    CHECK(trace.tau_d == 2);
    CHECK(trace.tau_c == 3);
}

TEST_CASE("order validation") {
    const CubeSpec spec = make_cube(2);
    CHECK_THROWS_AS(run_process(spec, ProcessOrder{spec, {0, 1, 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_process(spec, ProcessOrder{spec, {0, 1, 2, 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_process(spec, ProcessOrder{spec, {0, 1, 2, 4}}),
                    std::invalid_argument);
}

TEST_CASE("every trace satisfies tau_d <= tau_c and tau_c >= n-1") {
    for (int d : {2, 3, 5, 8}) {
        const CubeSpec spec = make_cube(d);
        for (std::uint64_t i = 0; i < 50; ++i) {
            RngStream rng = derive_stream(31, "trace-bounds", i * 100 + d);
            const ProcessOrder order = process_order(spec, rng);
            const ProcessTrace trace = run_process(spec, order);
            REQUIRE(trace.tau_d >= 1);
            REQUIRE(trace.tau_d <= trace.tau_c);
            REQUIRE(trace.tau_c >= spec.n - 1);
            REQUIRE(trace.tau_c <= spec.m);
        }
    }
}

TEST_CASE("replaying the same order yields the identical trace") {
    const CubeSpec spec = make_cube(6);
    RngStream rng = derive_stream(77, "replay", 0);
    const ProcessOrder order = process_order(spec, rng);
    const ProcessTrace a = run_process(spec, order);
    const ProcessTrace b = run_process(spec, order);
    CHECK(a.tau_d == b.tau_d);
    CHECK(a.tau_c == b.tau_c);
    CHECK(a.order_digest == b.order_digest);
}

TEST_CASE("hitting equality is certain at d=1") {
    const CubeSpec spec = make_cube(1);
    for (std::uint64_t i = 0; i < 20; ++i) {
        RngStream rng = derive_stream(1, "d1", i);
        REQUIRE(hitting_equality_trial(spec, rng));
    }
}

TEST_CASE("d=2 joint (tau_d, tau_c) enumeration matches Monte Carlo within 3 sigma") {
    const HittingEnumeration enumeration = exact_hitting_enumeration(2);
    REQUIRE(enumeration.orders == 24);

    const CubeSpec spec = make_cube(2);
    const std::uint64_t trials = 100000;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> observed;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream rng = derive_stream(8, "d2-joint", i);
        const ProcessOrder order = process_order(spec, rng);
        const ProcessTrace trace = run_process(spec, order);
        ++observed[{trace.tau_d, trace.tau_c}];
    }
    for (const auto& [key, count] : enumeration.joint) {
        const double exact = static_cast<double>(count) / 24.0;
        const double freq =
            static_cast<double>(observed[key]) / static_cast<double>(trials);
        const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(trials));
        REQUIRE(std::abs(freq - exact) <= 3.0 * sigma);
    }
    // No pair outside the enumerated support appeared.
    for (const auto& [key, count] : observed) REQUIRE(enumeration.joint.contains(key));
}

TEST_CASE("d=2 equality probability estimate approaches 2/3") {
    const CubeSpec spec = make_cube(2);
    const std::uint64_t trials = 100000;
    std::uint64_t equal = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream rng = derive_stream(4, "d2-equal", i);
        equal += hitting_equality_trial(spec, rng);
    }
    const double freq = static_cast<double>(equal) / static_cast<double>(trials);
    CHECK_THAT(freq, Catch::Matchers::WithinAbs(2.0 / 3.0, 0.01));
}
