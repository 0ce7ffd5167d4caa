#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "youngflow/drivers.hpp"
#include "youngflow/errors.hpp"
#include "youngflow/solver.hpp"

using namespace youngflow;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

double max_error(const SampledPath& x, const std::function<double(double)>& exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x.value(i)[0] - exact(x.time(i))));
    return e;
}

}  // namespace

TEST_CASE("zero coefficients give a constant path") {
    const auto field = linear_field(2, 0, 0, 0, 0);
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 101));
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    const auto r = solve_forward(field, w, e, 0.0, vec({1.0, -2.0}), 1.0);
    for (std::size_t i = 0; i < r.solution.size(); ++i) CHECK(r.solution.value(i) == vec({1.0, -2.0}));
    CHECK(r.max_residual() == 0.0);
    CHECK(r.certificates_ok());
    const auto b = solve_backward(field, w, e, 1.0, vec({3.0, 4.0}), 0.0);
    CHECK(b.solution.front() == vec({3.0, 4.0}));
}

TEST_CASE("linear multiplicative noise matches x0 exp(sin t)") {
    const auto field = linear_field(1, 0.0, 0.0, 1.0, 0.0);
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 2.0, 2001));
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    const auto r = solve_forward(field, w, e, 0.0, vec({1.5}), 2.0);
    CHECK(max_error(r.solution, [](double t) { return 1.5 * std::exp(std::sin(t)); }) <= 1e-5);
    CHECK(r.certificates_ok());
    for (const auto& c : r.certificates) CHECK_MESSAGE(c.ok, c.name);

    // The same equation started later: x0 exp(sin t - sin t0).
    const auto late = solve_forward(field, w, e, 0.5, vec({1.0}), 1.7);
    CHECK(max_error(late.solution, [](double t) { return std::exp(std::sin(t) - std::sin(0.5)); }) <= 1e-5);

    // Backward from the closed-form terminal value.
    const double xT = 1.5 * std::exp(std::sin(2.0));
    const auto b = solve_backward(field, w, e, 2.0, vec({xT}), 0.0);
    CHECK(max_error(b.solution, [](double t) { return 1.5 * std::exp(std::sin(t)); }) <= 1e-5);
    CHECK(b.backward);
}

TEST_CASE("pure drift matches x0 exp(-t)") {
    const auto field = linear_field(1, -1.0, 0.0, 0.0, 0.0);
    const auto w = fbm_sample({0.75, 1.0, 4097, 5});
    const auto e = select_exponents(1.5, 0.75, 1.0, 1.0);
    SolveOptions opts;
    opts.certify = false;
    const auto r = solve_forward(field, w, e, 0.0, vec({2.0}), 1.0, opts);
    CHECK(max_error(r.solution, [](double t) { return 2.0 * std::exp(-t); }) <= 1e-6);
}

TEST_CASE("fixed point, concatenation and round trip on an fbm scenario") {
    const auto field = bounded_smooth_field(2, 0.5, 0.6);
    const auto w = fbm_sample({0.75, 1.0, 513, 9});
    const auto e = select_exponents(1.5, 0.75, 1.0, 1.0);
    const Vector x0 = vec({0.5, -0.3});
    const auto r = solve_forward(field, w, e, 0.0, x0, 1.0);
    CHECK(r.max_residual() <= 1e-10);
    for (const auto& c : r.certificates) CHECK_MESSAGE(c.ok, c.name << " " << c.lhs << " " << c.rhs);
    CHECK(r.find("gronwall") != nullptr);
    CHECK(r.find("growth") != nullptr);
    CHECK(r.windows.size() == r.iters_per_interval.size());

    SolveOptions quiet;
    quiet.certify = false;
    const double mid = w.time(256);
    const auto a = solve_forward(field, w, e, 0.0, x0, mid, quiet);
    const auto b = solve_forward(field, w, e, mid, a.solution.back(), 1.0, quiet);
    CHECK((b.solution.back() - r.solution.back()).norm() <= 2e-10);

    const auto back = solve_backward(field, w, e, 1.0, r.solution.back(), 0.0, quiet);
    CHECK((back.solution.front() - x0).norm() <= 1e-6);
    for (std::size_t i = 0; i < r.solution.size(); i += 64)
        CHECK((back.solution.value(i) - r.solution.value(i)).norm() <= 1e-6);
}

TEST_CASE("F map and its bound") {
    const auto field = linear_field(1, -0.5, 0.1, 0.8, 0.05);
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 201));
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    const auto k = derive_constants(field, e, {0.0, 1.0});
    const auto x = SampledPath::tabulate(w.times(), 1, [](double t) { return vec({1.0 + t}); });
    const auto F = apply_F(field, w, x, {0.0, 1.0});
    CHECK(F.value.front()[0] == 1.0);
    CHECK((F.value.back() - (x.front() + F.drift.back() + F.young.back())).norm() <= 1e-14);
    CHECK(fx_certificate(field, w, x, {0.0, 1.0}, e, k).ok);
}

TEST_CASE("Euler scheme converges towards the Picard solution") {
    const auto field = linear_field(1, -0.5, 0.1, 0.8, 0.05);
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    const auto fine = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 4097));
    SolveOptions quiet;
    quiet.certify = false;
    const Vector ref = solve_forward(field, fine, e, 0.0, vec({1.0}), 1.0, quiet).solution.back();
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : {65, 257, 1025, 4097}) {
        const auto x = euler_solve(field, fine, 0.0, vec({1.0}), 1.0, uniform_grid(0.0, 1.0, n));
        const double err = (x.back() - ref).norm();
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("left quadrature is available and close on fine grids") {
    const auto field = linear_field(1, 0.0, 0.0, 1.0, 0.0);
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 4001));
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    SolveOptions opts;
    opts.young_rule = Quadrature::left;
    opts.certify = false;
    const auto r = solve_forward(field, w, e, 0.0, vec({1.0}), 1.0, opts);
    CHECK(max_error(r.solution, [](double t) { return std::exp(std::sin(t)); }) <= 1e-3);
}

TEST_CASE("single interval solve") {
    const auto field = linear_field(1, 0.0, 0.0, 1.0, 0.0);
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 1001));
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    const auto r = solve_interval(field, w, e, 0.0, vec({1.0}), 0.05);
    CHECK(r.residual <= 1e-10);
    CHECK(r.iterations >= 1);
    CHECK(r.path.end_time() == doctest::Approx(0.05));
}

TEST_CASE("Gronwall certificate on a hand-made path") {
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 201));
    GronwallInput in;
    in.y = SampledPath::tabulate(w.times(), 1, [](double t) { return vec({std::exp(0.5 * t)}); });
    in.form = GronwallForm::variation;
    in.a1 = 1.0;
    in.time_coeff = 1.0;
    in.driver_coeff = 1.0;
    const auto g = gronwall_certificate(in, w, 1.1, 1.5);
    CHECK(g.hypothesis.ok);
    CHECK(g.ok());
    CHECK(g.C == doctest::Approx(std::pow(4.0, 1.1) * std::pow(1.0, 1.1) * std::log(2.0)));
}

TEST_CASE("solver preconditions") {
    const auto field = linear_field(1, 0, 0, 1, 0);
    const auto w = analytic_driver("sine", {}, uniform_grid(0.0, 1.0, 101));
    const auto e = select_exponents(1.1, 0.75, 1.0, 1.0);
    CHECK_THROWS_AS(solve_forward(field, w, e, 0.0, vec({1.0, 2.0}), 1.0), ShapeError);
    CHECK_THROWS_AS(solve_forward(field, w, e, 0.0, vec({1.0}), 2.0), DomainError);
    SolveOptions opts;
    opts.picard_max_iters = 1;
    opts.max_depth = 0;
    CHECK_THROWS_AS(solve_forward(field, w, e, 0.0, vec({1.0}), 1.0, opts), SolverError);
}
