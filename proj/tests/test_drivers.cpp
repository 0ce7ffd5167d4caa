#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "youngflow/drivers.hpp"
#include "youngflow/errors.hpp"

using namespace youngflow;

TEST_CASE("fbm is pure in the seed and starts at zero") {
    const FbmSpec spec{0.75, 2.0, 513, 42};
    const auto a = fbm_sample(spec);
    const auto b = fbm_sample(spec);
    CHECK(a.values() == b.values());
    CHECK(a.times() == b.times());
    CHECK(a.front()[0] == 0.0);
    CHECK(a.end_time() == 2.0);
    CHECK(a.values() != fbm_sample({0.75, 2.0, 513, 43}).values());
}

TEST_CASE("fbm map reproduces the covariance exactly") {
    // The sample is linear in the normals: column j of the map is the path for e_j.
    for (double h : {0.5, 0.6, 0.75, 0.9}) {
        const std::size_t n = 129;
        const FbmSpec spec{h, 1.5, n, 0};
        std::vector<Eigen::VectorXd> columns;
        std::vector<double> e(n - 1, 0.0);
        Eigen::MatrixXd L(n, n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            e.assign(n - 1, 0.0);
            e[j] = 1.0;
            const auto path = fbm_from_normals(spec, e);
            for (std::size_t i = 0; i < n; ++i) L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = path.value(i)[0];
        }
        const Eigen::MatrixXd C = L * L.transpose();
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const double r = fbm_covariance(h, 1.5 * i / (n - 1.0), 1.5 * k / (n - 1.0));
                worst = std::max(worst, std::abs(C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) - r));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("covariance formula") {
    CHECK(fbm_covariance(0.5, 0.3, 0.7) == doctest::Approx(0.3));
    CHECK(fbm_covariance(0.75, 1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("invalid specs") {
    CHECK_THROWS_AS(fbm_sample({0.4, 1.0, 10, 0}), ParameterError);
    CHECK_THROWS_AS(fbm_sample({1.0, 1.0, 10, 0}), ParameterError);
    CHECK_THROWS_AS(fbm_sample({0.7, -1.0, 10, 0}), ParameterError);
    CHECK_THROWS_AS(fbm_sample({0.7, 1.0, 1, 0}), ParameterError);
    std::vector<double> few(3, 0.0);
    CHECK_THROWS_AS(fbm_from_normals({0.7, 1.0, 10, 0}, few), ParameterError);
}

TEST_CASE("analytic drivers") {
    const auto lin = analytic_driver("linear", {}, uniform_grid(0.0, 1.0, 11));
    for (std::size_t i = 0; i < 11; ++i) CHECK(lin.value(i)[0] == doctest::Approx(0.1 * i));
    const double pi = std::acos(-1.0);
    const auto sine = analytic_driver("sine", {{"a", 1.0}}, uniform_grid(0.0, pi, 10000));
    CHECK(std::abs(p_variation(sine, 1.0) - 2.0) <= 1e-3);
    const auto sq = analytic_driver("power", {{"k", 2.0}}, uniform_grid(0.0, 1.0, 5));
    CHECK(sq.value(2)[0] == doctest::Approx(0.25));
    const auto rough = analytic_driver("brownian_like", {{"hurst", 0.7}, {"levels", 6}}, uniform_grid(0.0, 1.0, 65));
    CHECK(rough.size() == 65);
    CHECK_THROWS_AS(analytic_driver("cauchy", {}, uniform_grid(0.0, 1.0, 5)), ParameterError);
}

TEST_CASE("uniform grid endpoints are exact") {
    const auto g = uniform_grid(0.1, 0.7, 7);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 0.7);
    CHECK(g.size() == 7);
}
