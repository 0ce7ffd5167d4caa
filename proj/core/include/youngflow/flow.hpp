#pragma once

#include <optional>
#include <vector>

#include "youngflow/certificate.hpp"
#include "youngflow/coefficients.hpp"
#include "youngflow/paths.hpp"
#include "youngflow/solver.hpp"

namespace youngflow {

// X(t1, t2, w, x): forward solve when t1 < t2, backward when t1 > t2, x itself when equal.
// Certificates are skipped; only the endpoint is returned.
Vector cauchy_operator(const CoefficientField& field, const SampledPath& driver,
                       const ExponentSet& exponents, double t1, double t2, const Vector& x,
                       SolveOptions opts = {});

struct ContinuityRow {
    double perturbation = 0.0;  // |x0' - x0| or ||w' - w||_p
    double response = 0.0;      // sup_t |X' - X| over the grid
    double bound = 0.0;         // certified constant times perturbation
};

struct FlowCheckReport {
    double s = 0.0;
    double u = 0.0;
    double t = 0.0;
    double tolerance = 0.0;
    double identity_residual = 0.0;     // max |X(s,s,x) - x|
    double inversion_residual = 0.0;    // max |X(t,s,X(s,t,x)) - x|
    double composition_residual = 0.0;  // max |X(u,t,X(s,u,x)) - X(s,t,x)|
    std::vector<ContinuityRow> continuity_table;
    bool ok = false;
};

// Axioms (ii)-(iv) of a two-parameter flow on every probe; the continuity table perturbs
// the first probe by each of `perturbations` (defaults 1e-3, 1e-2, 1e-1) along (1,...,1)/sqrt(d).
FlowCheckReport flow_axiom_check(const CoefficientField& field, const SampledPath& driver,
                                 const ExponentSet& exponents, double s, double u, double t,
                                 const std::vector<Vector>& probes, double tol,
                                 SolveOptions opts = {}, std::vector<double> perturbations = {});

// Response of the solution on [t0, T] to w' = w + eps * sin(pi (t - t0) / (T - t0)).
std::vector<ContinuityRow> driver_continuity_table(const CoefficientField& field,
                                                   const SampledPath& driver,
                                                   const ExponentSet& exponents, double t0,
                                                   const Vector& x0, double T,
                                                   const std::vector<double>& eps,
                                                   SolveOptions opts = {});

struct NonIntersectionReport {
    Certificate certificate;  // lhs = floor, rhs = min separation; ok iff floor <= sep and sep > 0
    double min_separation = 0.0;
    double floor = 0.0;
    double at_time = 0.0;
};

// Floor: |x0 - x0'| / C_back with C_back the initial-value constant of the backward flow,
// unless `separation_floor` is given.
NonIntersectionReport non_intersection_check(const CoefficientField& field,
                                             const SampledPath& driver,
                                             const ExponentSet& exponents, double t0,
                                             const Vector& x0, const Vector& x0_prime,
                                             Interval window,
                                             std::optional<double> separation_floor = {},
                                             SolveOptions opts = {});

}  // namespace youngflow
