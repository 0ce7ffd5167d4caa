#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "youngflow/drivers.hpp"
#include "youngflow/errors.hpp"
#include "youngflow/greedy.hpp"

using namespace youngflow;

TEST_CASE("linear driver has closed-form greedy times") {
    const auto w = analytic_driver("linear", {}, uniform_grid(0.0, 1.0, 1001));
    const auto seq = greedy_sequence(w, 0.0, 1.0, 1.0, 0.5, 1.5);
    REQUIRE(seq.times.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(seq.times[i] - 0.25 * static_cast<double>(i)) <= 1e-10);
    for (double r : seq.residuals) CHECK(std::abs(r) <= kGreedyResidualTolerance);
    CHECK(seq.full_steps() == 4);
}

TEST_CASE("defining equation on fbm drivers") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto w = fbm_sample({0.75, 1.0, 1025, seed});
        const auto seq = greedy_sequence(w, 0.0, 1.0, 0.75, 0.4, 1.5);
        for (std::size_t i = 0; i < seq.steps(); ++i) {
            const double a = seq.times[i], b = seq.times[i + 1];
            const double lhs = std::pow(b - a, 0.75) + p_variation(w, 1.5, {a, b});
            if (!seq.clamped(i)) CHECK(std::abs(lhs - 0.4) <= 1e-8);
            else CHECK(lhs < 0.4);
        }
        const auto cb = count_bound(w, {0.0, 1.0}, 0.75, 0.4, 1.5, 1.5);
        CHECK(cb.holds());
        CHECK(cb.actual == seq.full_steps());
    }
}

TEST_CASE("huge budget reaches the end in one clamped step") {
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 101));
    const auto seq = greedy_sequence(w, 0.0, 1.0, 1.0, 100.0, 1.2);
    CHECK(seq.times.size() == 2);
    CHECK(seq.full_steps() == 0);
    CHECK(next_greedy_time(w, 0.0, 1.0, 100.0, 1.2) == 1.0);
}

TEST_CASE("count estimate formula") {
    // 2^{p'-1} mu^{-p'} ((b-a)^{p' lambda} + V^{p'})
    CHECK(greedy_count_estimate(1.0, 1.0, 1.0, 0.5, 1.5) ==
          doctest::Approx(std::pow(2.0, 0.5) * std::pow(0.5, -1.5) * 2.0));
}

TEST_CASE("invalid parameters") {
    const auto w = analytic_driver("linear", {}, uniform_grid(0.0, 1.0, 11));
    CHECK_THROWS_AS(greedy_sequence(w, 0.0, 1.0, 1.0, -1.0, 1.5), ParameterError);
    CHECK_THROWS_AS(greedy_sequence(w, 0.0, 1.0, 0.0, 0.5, 1.5), ParameterError);
    CHECK_THROWS_AS(next_greedy_time(w, 1.0, 1.0, 0.5, 1.5), ExhaustedError);
}
