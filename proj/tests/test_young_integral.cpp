#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "youngflow/errors.hpp"
#include "youngflow/young_integral.hpp"

using namespace youngflow;

namespace {

SampledPath smooth(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double a = coef(rng), b = 3.0 * coef(rng), c = coef(rng), phase = 3.0 * coef(rng);
    return SampledPath::tabulate(testing::grid(lo, hi, n), 1, [&](double t) {
        Vector v(1);
        v[0] = a * t + c * std::sin(b * t + phase) + 0.3 * std::cos(5.0 * t * c);
        return v;
    });
}

}  // namespace

TEST_CASE("constants") {
    const auto k = YoungConstants::make(1.5, 2.0);
    CHECK(k.theta == doctest::Approx(1.0 / 1.5 + 0.5));
    CHECK(k.K == doctest::Approx(1.0 / (1.0 - std::pow(2.0, 1.0 - k.theta))));
    CHECK_THROWS_AS(YoungConstants::make(2.0, 2.0), RegularityError);
    CHECK_THROWS_AS(YoungConstants::make(0.9, 2.0), ParameterError);
}

TEST_CASE("integral of t against t squared") {
    const auto t = testing::grid(0.0, 1.0, 10000);
    const auto x = testing::scalar_fn(0.0, 1.0, 10000, [](double s) { return s; });
    const auto w = testing::scalar_fn(0.0, 1.0, 10000, [](double s) { return s * s; });
    const auto r = young_integral(x, w, {0.0, 1.0}, YoungConstants::make(1.0, 1.0));
    CHECK(std::abs(r.value[0] - 2.0 / 3.0) <= 2e-4);
    CHECK(r.partition_size == 9999);
    // Successive halvings of the partition approach the limit monotonically.
    for (std::size_t k = 1; k < 5; ++k) {
        CHECK(std::abs(r.coarsenings[k - 1][0] - 2.0 / 3.0) < std::abs(r.coarsenings[k][0] - 2.0 / 3.0));
    }
}

TEST_CASE("constant integrand telescopes and reversal negates") {
    std::mt19937_64 rng(4);
    const auto w = testing::random_walk(rng, 200, 2);
    const auto ones = SampledPath::tabulate(w.times(), 2, [](double) { return Vector::Ones(2); });
    const Interval win{w.time(10), w.time(150)};
    const Vector s = rs_sum(ones, w, win);
    CHECK(s[0] == doctest::Approx(w.value(150).sum() - w.value(10).sum()).epsilon(1e-14));

    const auto x = testing::random_walk(rng, 200, 2);
    for (Rule rule : {Rule::left, Rule::right, Rule::midpoint}) (void)rs_sum(x, w, win, rule);
    const Vector fwd = rs_sum(x, w, win);
    const Vector back = reverse_integral(x, w, win);
    CHECK((fwd + back).norm() <= 1e-14 * std::max(1.0, fwd.norm()));
}

TEST_CASE("empty window gives zero") {
    const auto w = testing::scalar_fn(0.0, 1.0, 5, [](double s) { return s; });
    CHECK(rs_sum(w, w, {0.5, 0.5})[0] == 0.0);
}

TEST_CASE("Young-Loeve estimates hold on random smooth pairs") {
    std::mt19937_64 rng(123);
    const auto k = YoungConstants::make(1.4, 1.6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = smooth(rng, 257, 0.0, 2.0);
        const auto w = smooth(rng, 257, 0.0, 2.0);
        for (int level = 0; level < 3; ++level) {
            const int parts = 1 << level;
            for (int j = 0; j < parts; ++j) {
                const Interval win{2.0 * j / parts, 2.0 * (j + 1) / parts};
                const auto c = young_loeve_check(x, w, win, k);
                CHECK(c.ok);
                CHECK(c.integral_variation_ok);
                CHECK(c.defect <= c.bound + 1e-10);
            }
        }
    }
}

TEST_CASE("matrix integrands contract against the driver") {
    // x in R^{2x2} row-major, w in R^2.
    const auto t = testing::grid(0.0, 1.0, 3);
    const auto x = SampledPath::tabulate(t, 4, [](double) {
        Vector v(4);
        v << 1.0, 2.0, 3.0, 4.0;
        return v;
    });
    const auto w = SampledPath::tabulate(t, 2, [](double s) {
        Vector v(2);
        v << s, 2.0 * s;
        return v;
    });
    const Vector r = rs_sum(x, w, {0.0, 1.0});
    CHECK(r[0] == doctest::Approx(1.0 + 4.0));
    CHECK(r[1] == doctest::Approx(3.0 + 8.0));
    const auto bad = SampledPath::tabulate(t, 3, [](double) { return Vector::Ones(3); });
    CHECK_THROWS_AS(rs_sum(bad, w, {0.0, 1.0}), ShapeError);
}
