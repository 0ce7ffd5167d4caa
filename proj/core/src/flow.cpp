#include "youngflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

double max_gap(const SampledPath& a, const SampledPath& b) {
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, (a.value(i) - b.value(i)).norm());
    return gap;
}

Vector unit_diagonal(std::size_t d) {
    return Vector::Constant(static_cast<Eigen::Index>(d), 1.0 / std::sqrt(static_cast<double>(d)));
}

}  // namespace

Vector cauchy_operator(const CoefficientField& field, const SampledPath& driver,
                       const ExponentSet& exponents, double t1, double t2, const Vector& x,
                       SolveOptions opts) {
    if (t1 == t2) {
        require_window(driver, {t1, t1});
        return x;
    }
    opts.certify = false;
    if (t1 < t2) return solve_forward(field, driver, exponents, t1, x, t2, opts).solution.back();
    return solve_backward(field, driver, exponents, t1, x, t2, opts).solution.front();
}

FlowCheckReport flow_axiom_check(const CoefficientField& field, const SampledPath& driver,
                                 const ExponentSet& exponents, double s, double u, double t,
                                 const std::vector<Vector>& probes, double tol, SolveOptions opts,
                                 std::vector<double> perturbations) {
    FlowCheckReport r;
    r.s = s;
    r.u = u;
    r.t = t;
    r.tolerance = tol;
    opts.certify = false;
    auto X = [&](double a, double b, const Vector& x) {
        return cauchy_operator(field, driver, exponents, a, b, x, opts);
    };
    for (const Vector& x : probes) {
        r.identity_residual = std::max(r.identity_residual, (X(s, s, x) - x).norm());
        const Vector xt = X(s, t, x);
        r.inversion_residual = std::max(r.inversion_residual, (X(t, s, xt) - x).norm());
        r.composition_residual =
            std::max(r.composition_residual, (X(u, t, X(s, u, x)) - xt).norm());
    }
    r.ok = r.identity_residual <= tol && r.inversion_residual <= tol && r.composition_residual <= tol;

    if (!probes.empty() && s != t) {
        if (perturbations.empty()) perturbations = {1e-3, 1e-2, 1e-1};
        const Vector& x = probes.front();
        const Vector dir = unit_diagonal(field.state_dim);
        if (s < t) {
            const Interval window{s, t};
            const SolveReport base = solve_forward(field, driver, exponents, s, x, t, opts);
            const DerivedConstants k = derive_constants(field, exponents, window);
            const double var = p_variation(driver, exponents.p, window);
            const double n0 = p_variation_norm(base.solution, exponents.q, window);
            for (double eps : perturbations) {
                const SolveReport moved =
                    solve_forward(field, driver, exponents, s, x + eps * dir, t, opts);
                const double N = std::max(n0, p_variation_norm(moved.solution, exponents.q, window));
                r.continuity_table.push_back(
                    {eps, (moved.solution.back() - base.solution.back()).norm(),
                     initial_value_lipschitz(exponents, k, N, window, var) * eps});
            }
        } else {
            const Vector base = X(s, t, x);
            for (double eps : perturbations) {
                r.continuity_table.push_back({eps, (X(s, t, x + eps * dir) - base).norm(),
                                              std::numeric_limits<double>::quiet_NaN()});
            }
        }
    }
    return r;
}

std::vector<ContinuityRow> driver_continuity_table(const CoefficientField& field,
                                                   const SampledPath& driver,
                                                   const ExponentSet& exponents, double t0,
                                                   const Vector& x0, double T,
                                                   const std::vector<double>& eps,
                                                   SolveOptions opts) {
    opts.certify = false;
    const Interval window{t0, T};
    const SolveReport base = solve_forward(field, driver, exponents, t0, x0, T, opts);
    const DerivedConstants k = derive_constants(field, exponents, window);
    std::vector<ContinuityRow> rows;
    const double pi = std::acos(-1.0);
    for (double e : eps) {
        RowMatrix values = driver.values();
        for (std::size_t i = 0; i < driver.size(); ++i) {
            const double ti = std::clamp(driver.time(i), t0, T);
            values.row(static_cast<Eigen::Index>(i)).array() += e * std::sin(pi * (ti - t0) / (T - t0));
        }
        const SampledPath moved_driver(driver.times(), std::move(values));
        const SolveReport moved = solve_forward(field, moved_driver, exponents, t0, x0, T, opts);
        const SampledPath bump = difference(moved_driver, driver);
        const double size = p_variation_norm(bump, exponents.p, window);
        const double N = std::max(p_variation_norm(base.solution, exponents.q, window),
                                  p_variation_norm(moved.solution, exponents.q, window));
        const double var = std::max(p_variation(driver, exponents.p, window),
                                    p_variation(moved_driver, exponents.p, window));
        const double C = driver_lipschitz(exponents, k, N,
                                          p_variation_norm(moved.solution, exponents.q, window),
                                          window, var);
        rows.push_back({size, max_gap(base.solution, moved.solution), C * size});
    }
    return rows;
}

NonIntersectionReport non_intersection_check(const CoefficientField& field,
                                             const SampledPath& driver,
                                             const ExponentSet& exponents, double t0,
                                             const Vector& x0, const Vector& x0_prime,
                                             Interval window, std::optional<double> separation_floor,
                                             SolveOptions opts) {
    const double gap0 = (x0 - x0_prime).norm();
    if (!(gap0 > 0.0)) throw PreconditionError("non-intersection needs distinct initial values");
    if (t0 != window.lo) throw DomainError("the window must start at t0");
    opts.certify = false;
    const SolveReport a = solve_forward(field, driver, exponents, t0, x0, window.hi, opts);
    const SolveReport b = solve_forward(field, driver, exponents, t0, x0_prime, window.hi, opts);

    NonIntersectionReport r;
    r.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.solution.size(); ++i) {
        const double sep = (a.solution.value(i) - b.solution.value(i)).norm();
        if (sep < r.min_separation) {
            r.min_separation = sep;
            r.at_time = a.solution.time(i);
        }
    }
    if (separation_floor) {
        r.floor = *separation_floor;
    } else {
        // Meeting at time t would let the backward flow map one point to both x0 and x0'.
        const double N = std::max(p_variation_norm(a.solution, exponents.q, window),
                                  p_variation_norm(b.solution, exponents.q, window));
        const double var = p_variation(driver, exponents.p, window);
        const DerivedConstants fwd = derive_constants(field, exponents, window);
        const DerivedConstants bwd =
            derive_constants(time_reversed(field, window.lo + window.hi), exponents, window);
        const double C = std::max(initial_value_lipschitz(exponents, fwd, N, window, var),
                                  initial_value_lipschitz(exponents, bwd, N, window, var));
        r.floor = std::isfinite(C) ? gap0 / C : 0.0;
    }
    r.certificate = make_certificate("non-intersection", r.floor, r.min_separation, window);
    r.certificate.ok = r.certificate.ok && r.min_separation > 0.0;
    return r;
}

}  // namespace youngflow
