#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "support.hpp"
#include "youngflow/coefficients.hpp"
#include "youngflow/drivers.hpp"
#include "youngflow/errors.hpp"

using namespace youngflow;

TEST_CASE("exponent selection at the midpoints") {
    const auto e = select_exponents(1.5, 0.75, 1.0, 1.0);
    const double iq0 = 0.5 * ((1.0 - 1.0 / 1.5) + 0.5);
    CHECK(e.q0 == doctest::Approx(1.0 / iq0).epsilon(1e-14));
    const double iq = 0.5 * (iq0 + 1.0 / 1.5);
    CHECK(e.q == doctest::Approx(1.0 / iq).epsilon(1e-14));
    CHECK(e.p_prime == doctest::Approx(1.5));
    CHECK(exponent_violations(e).empty());
    CHECK(1.0 / e.p + 1.0 / e.q0 > 1.0);
    CHECK(e.q * e.alpha > 1.0);
    CHECK(e.q > e.p);

    const auto smooth = select_exponents(1.1, 0.75, 1.0, 1.0);
    CHECK(smooth.p_prime == doctest::Approx(1.0 / 0.75));
}

TEST_CASE("property: every feasible choice satisfies all relations") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> p(1.01, 1.99), a(0.5, 0.99), b(0.05, 1.0), d(0.05, 1.0);
    int feasible = 0;
    for (int i = 0; i < 500; ++i) {
        try {
            const auto e = select_exponents(p(rng), a(rng), b(rng), d(rng));
            CHECK(exponent_violations(e).empty());
            ++feasible;
        } catch (const InfeasibleError& err) {
            CHECK(std::string(err.what()).rfind("infeasible exponents: ", 0) == 0);
        }
    }
    CHECK(feasible > 50);
}

TEST_CASE("infeasible exponents name the inequality") {
    try {
        select_exponents(1.9, 0.5, 1.0, 0.92);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("delta alpha > 1 - 1/p") != std::string::npos);
    }
    CHECK_THROWS_AS(select_exponents(2.0, 0.75, 1.0, 1.0), InfeasibleError);
    CHECK_THROWS_AS(select_exponents(1.5, 0.4, 1.0, 1.0), InfeasibleError);
    ExponentSet bad;
    bad.p = 1.5;
    bad.q0 = 1.5;
    bad.q = 1.2;
    bad.alpha = 0.75;
    bad.beta = 1.0;
    bad.delta = 1.0;
    bad.p_prime = 1.5;
    CHECK_FALSE(exponent_violations(bad).empty());
}

TEST_CASE("derived constants") {
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    const auto zero = linear_field(1, 0, 0, 0, 0);
    const auto z = derive_constants(zero, e, {0.0, 1.0});
    CHECK(z.M == 0.0);
    CHECK(std::isinf(z.mu_star));

    const auto lin = linear_field(1, -0.5, 0.1, 0.8, 0.05);
    const auto k = derive_constants(lin, e, {0.0, 2.0});
    const double expected_M = std::max({0.8, 0.5 * std::pow(2.0, 0.25), 0.05, 0.1 * std::pow(2.0, 0.25)});
    CHECK(k.M == doctest::Approx(expected_M).epsilon(1e-6));
    CHECK(k.K == doctest::Approx(e.drift_young().K));
    CHECK(k.mu_star == doctest::Approx(1.0 / (2.0 * k.M * (k.K + 2.0))));
    CHECK(k.M_prime(3.0) >= k.M);
}

TEST_CASE("declared constants survive random probing") {
    const auto e = select_exponents(1.5, 0.75, 1.0, 1.0);
    for (const auto& field : {linear_field(2, -0.3, 0.2, 0.7, 0.1), bounded_smooth_field(2, 0.5, 0.6),
                              time_varying_field(3, 0.5, 0.5)}) {
        const auto k = derive_constants(field, e, {0.0, 2.0});
        const auto r = probe_field(field, k, 4.0, 2000);
        CHECK_MESSAGE(r.ok, field.name);
        CHECK(r.g_lipschitz <= 1.0 + 1e-9);
        CHECK(r.gx_holder <= 1.0 + 1e-9);
        CHECK(r.f_growth <= 1.0 + 1e-9);
        CHECK(r.g_growth <= 1.0 + 1e-9);
    }
}

TEST_CASE("time reversal negates the drift and reverses time") {
    const auto f = time_varying_field(1, 0.5, 0.5);
    const auto r = time_reversed(f, 2.0);
    Vector x(1);
    x << 0.3;
    CHECK(r.drift(0.5, x)[0] == doctest::Approx(-f.drift(1.5, x)[0]));
    CHECK(r.diffusion(0.5, x)(0, 0) == doctest::Approx(f.diffusion(1.5, x)(0, 0)));
}

TEST_CASE("composition estimates") {
    const auto e = select_exponents(1.5, 0.75, 1.0, 1.0);
    const auto field = bounded_smooth_field(1, 0.5, 0.6);
    const auto k = derive_constants(field, e, {0.0, 1.0});
    const auto x = fbm_sample({0.75, 1.0, 257, 3});
    const auto y = SampledPath::tabulate(x.times(), 1, [&](double t) {
        Vector v = x.at(t);
        v[0] = 0.5 * v[0] + 0.2 * std::sin(3.0 * t);
        return v;
    });
    const auto gx = compose_diffusion(field, x);
    CHECK(gx.dimension() == 1);
    const auto cert = composed_variation_bound(field, x, {0.0, 1.0}, e, k);
    CHECK(cert.ok);
    const double N = std::max(sup_norm(x, {0.0, 1.0}), sup_norm(y, {0.0, 1.0}));
    const auto diff = composed_difference_bound(field, x, y, {0.0, 1.0}, e, k, N);
    CHECK(diff.integrated.ok);
    CHECK(diff.four_point.ok);
    const auto moved = SampledPath::tabulate(x.times(), 1, [&](double t) { return Vector(x.at(t).array() + 1.0); });
    CHECK_THROWS_AS(composed_difference_bound(field, x, moved, {0.0, 1.0}, e, k, N + 2.0), PreconditionError);
}
