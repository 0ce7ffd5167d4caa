#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "youngflow/certificate.hpp"
#include "youngflow/coefficients.hpp"
#include "youngflow/greedy.hpp"
#include "youngflow/paths.hpp"

namespace youngflow {

// Quadrature of the Young term inside F. Trapezoid makes the discrete scheme
// symmetric under time reversal; left is the plain Riemann–Stieltjes sum.
enum class Quadrature { trapezoid, left };

struct SolveOptions {
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    double shrink_factor = 0.5;
    std::vector<double> grid;  // empty: driver samples inside [t0, T] plus both ends
    std::optional<double> mu_override;
    Quadrature young_rule = Quadrature::trapezoid;
    int max_depth = 20;
    bool euler_warm_start = false;  // Picard starts from the Euler path instead of x0
    bool certify = true;
    std::size_t certificate_starts = 8;  // left ends of the (s, t) pairs sampled by certificates
};

struct FMap {
    SampledPath value;  // F(x)
    SampledPath drift;  // I(x) = int f(s, x_s) ds
    SampledPath young;  // J(x) = int g(s, x_s) dw_s
};

// F(x)_t = x_{t0} + I(x)_t + J(x)_t on the samples of x inside the window.
FMap apply_F(const CoefficientField& field, const SampledPath& driver, const SampledPath& x,
             Interval window, Quadrature rule = Quadrature::trapezoid);

// |||F(x)|||_q <= M (K + 2) (1 + ||x||_q) ((t1 - t0)^alpha + |||w|||_p), K for (p, q0).
Certificate fx_certificate(const CoefficientField& field, const SampledPath& driver,
                           const SampledPath& x, Interval window, const ExponentSet& exponents,
                           const DerivedConstants& constants,
                           Quadrature rule = Quadrature::trapezoid);

struct IntervalSolution {
    SampledPath path;
    int iterations = 0;
    double residual = 0.0;  // sup |x - F(x)|
    bool ball_ok = true;    // every iterate had ||x||_q <= 2 |x0| + 1
    std::size_t subdivisions = 0;
};

// Picard iteration on [t0, t1] over the option grid (or the driver samples).
IntervalSolution solve_interval(const CoefficientField& field, const SampledPath& driver,
                                const ExponentSet& exponents, double t0, const Vector& x0,
                                double t1, const SolveOptions& opts = {});

struct SolveReport {
    SampledPath solution;
    GreedySequence greedy;
    std::vector<Interval> windows;  // intervals actually solved, snapped to the grid
    std::vector<int> iters_per_interval;
    std::vector<double> fixed_point_residuals;
    std::vector<bool> ball_ok;
    std::size_t subdivisions = 0;
    std::vector<Certificate> certificates;
    ExponentSet exponents;
    double M = 0.0;
    double K = 0.0;
    double mu = 0.0;
    double t0 = 0.0;
    double T = 0.0;
    bool backward = false;

    int max_iterations() const;
    double max_residual() const;
    bool certificates_ok() const { return all_ok(certificates); }
    const Certificate* find(const std::string& name) const;
};

SolveReport solve_forward(const CoefficientField& field, const SampledPath& driver,
                          const ExponentSet& exponents, double t0, const Vector& x0, double T,
                          const SolveOptions& opts = {});
// Terminal value problem x_t = x_T - int_t^T f ds - int_t^T g dw for t in [t0, T] (the inverse
// of the forward flow), solved forward in reversed time. The solution runs on [t0, T] with x(T) = xT.
// forward in reversed time. The returned solution runs on [t0, T] with x(T) = xT.
SolveReport solve_backward(const CoefficientField& field, const SampledPath& driver,
                           const ExponentSet& exponents, double T, const Vector& xT, double t0,
                           const SolveOptions& opts = {});

// x_{i+1} = x_i + f(t_i, x_i) dt + g(t_i, x_i) dw on the grid (driver samples if empty).
SampledPath euler_solve(const CoefficientField& field, const SampledPath& driver, double t0,
                        const Vector& x0, double T, std::vector<double> grid = {});

enum class GronwallForm {
    // |y_t - y_s| <= A^{1/q} + a1 |int y du| + a2 |int y dw|
    increments,
    // |||y|||_{q,[s,t]} <= A^{1/q} + a1 (|y_s| + |||y|||_{q,[s,t]}) (t - s + |||w|||_{p,[s,t]})
    variation,
};

struct GronwallInput {
    SampledPath y;
    GronwallForm form = GronwallForm::variation;
    double a1 = 0.0;
    double a2 = 0.0;
    double K = 0.0;  // Young–Loève constant entering c = max{a1, a2 (K + 1)}
    // A(s,t) = 2^{q-1} (time_coeff^q (t-s)^q + driver_coeff^q |||w|||^q_{p,[s,t]}) unless
    // `control` is set.
    double time_coeff = 0.0;
    double driver_coeff = 0.0;
    ControlFunction control;

    double c() const;
};

struct GronwallReport {
    Certificate conclusion;  // |||y|||_q <= (2 A0 + |y_s|) exp(C (|t-s|^p + |||w|||_p^p)), worst pair
    Certificate hypothesis;  // worst sampled pair of the assumed inequality
    Certificate sup_bound;   // ||y||_inf <= (2 A0 + |y_0|) 2^{N + 1}
    Certificate recursion;   // 2 A0 + |y_{t_{i+1}}| <= 2 (2 A0 + |y_{t_i}|) along greedy times
    double c = 0.0;
    double C = 0.0;
    double A0 = 0.0;
    std::size_t greedy_count = 0;

    bool ok() const { return conclusion.ok && hypothesis.ok && sup_bound.ok && recursion.ok; }
    std::vector<Certificate> all() const { return {hypothesis, conclusion, sup_bound, recursion}; }
};

// Pairs (s, t): `starts` evenly spaced left ends times every later sample.
GronwallReport gronwall_certificate(const GronwallInput& input, const SampledPath& driver, double p,
                                    double q, std::size_t starts = 8);

// Input for a solution of the full equation: variation form with
// a1 = max{a, M (K + 1)}, time_coeff = max b, driver_coeff = M (K + 2).
GronwallInput solution_gronwall_input(const SolveReport& report, const CoefficientField& field);

// ||x||_{q,[t0,T]} <= C1 [1 + (T-t0)^alpha] (1 + |x0|) (1 + |||w|||_p) exp(C2 |||w|||_p^{p'}),
// C2 = (4 c)^{p'} ln 2, C1 = 2 exp(C2 (T - t0)^{p' alpha}), c = M (K + 2). `until` restricts
// the check to [t0, until].
Certificate growth_certificate(const SolveReport& report, const CoefficientField& field,
                               const SampledPath& driver, std::optional<double> until = {});

// Constant of |X(t0,t,x0') - X(t0,t,x0)| <= C |x0' - x0| on [t0, T]:
// C = 1 + exp(C' ((T-t0)^p + |||w|||_p^p)), C' = 4^p c^p ln 2, c = M'_N (K + 1)(2 + 2 N^delta).
double initial_value_lipschitz(const ExponentSet& exponents, const DerivedConstants& constants,
                               double N, Interval window, double driver_variation);

// Constant of |X(t0,t,w',x0) - X(t0,t,w,x0)| <= C ||w' - w||_p on [t0, T]:
// C = 2 C5 exp(C' (...)), C5 = M (K + 1)(1 + ||x'||_q).
double driver_lipschitz(const ExponentSet& exponents, const DerivedConstants& constants, double N,
                        double solution_norm, Interval window, double driver_variation);

}  // namespace youngflow
