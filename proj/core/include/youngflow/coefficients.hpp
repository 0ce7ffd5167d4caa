#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "youngflow/certificate.hpp"
#include "youngflow/paths.hpp"
#include "youngflow/young_integral.hpp"

namespace youngflow {

// Declared regularity constants of a coefficient pair (f, g).
//
//   |g(t,x) - g(t,y)|                       <= L_g |x - y|
//   |g_x(t,x) - g_x(t,y)|                   <= M_N |x - y|^delta     (|x|,|y| <= N)
//   |g(t,x) - g(s,x)| + |g_x(t,x) - g_x(s,x)| <= h(s,t)^beta,   h(s,t) = L_h (t - s)
//   |f(t,x) - f(t,y)|                       <= L_N |x - y|          (|x|,|y| <= N)
//   |f(t,x)|                                <= a |x| + b(t)
//
// Norms of g are Frobenius; the norm of the derivative tensor g_x is
// sqrt(sum_k |d g / d x_k|_F^2).
struct FieldConstants {
    double lipschitz_g = 0.0;
    std::function<double(double)> holder_gx;  // N -> M_N
    double delta = 1.0;
    double beta = 1.0;
    double time_lipschitz = 0.0;  // L_h
    std::function<double(double)> lipschitz_f;  // N -> L_N
    double growth_a = 0.0;
    std::function<double(double)> growth_b;  // t -> b(t) >= 0
    double alpha = 0.75;
};

// f : (t, x in R^d) -> R^d, g : (t, x) -> R^{d x m}, g_x : (t, x) -> d matrices d g / d x_k.
// All three must be pure and reentrant.
struct CoefficientField {
    std::string name;
    std::size_t state_dim = 1;
    std::size_t noise_dim = 1;
    std::function<Vector(double, const Vector&)> drift;
    std::function<Matrix(double, const Vector&)> diffusion;
    std::function<std::vector<Matrix>(double, const Vector&)> diffusion_jacobian;
    FieldConstants constants;

    ControlFunction time_control() const;
    // ||b||_{L_{1/(1-alpha)}} over the horizon, by composite Simpson quadrature.
    double b_norm(Interval horizon) const;
};

// Field of the inverse flow in reversed time u = pivot - t: drift -f(pivot - u, x) and
// diffusion g(pivot - u, x), to be driven by u -> w(pivot - u). Every declared constant
// bounds |f| or |g| and carries over unchanged.
CoefficientField time_reversed(const CoefficientField& field, double pivot);

// f = a x + b0 1,  g = c x + d0 1  (d x 1).
CoefficientField linear_field(std::size_t dim, double a, double b0, double c, double d0,
                              double alpha = 0.75);
// f_i = -kf tanh(x_i),  g_i = sigma (cos(x_i) + tanh(x_i)) / 2.
CoefficientField bounded_smooth_field(std::size_t dim, double kf, double sigma, double alpha = 0.75);
// f_i = -x_i + amp sin(t),  g_i = sigma (cos(t) tanh(x_i) + 1/2).
CoefficientField time_varying_field(std::size_t dim, double amp, double sigma, double alpha = 0.75);

struct ExponentSet {
    double p = 0.0;
    double q0 = 0.0;
    double q = 0.0;
    double p_prime = 0.0;  // max(p, 1/alpha)
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;

    // Constants of int g(., x.) dw: driver in p-var, integrand in q0-var.
    YoungConstants drift_young() const { return YoungConstants::make(p, q0); }
    // Constants of int y dw for a path y in q-var.
    YoungConstants path_young() const { return YoungConstants::make(p, q); }
};

// Chooses 1/q0 at the midpoint of (1 - 1/p, min{beta, delta alpha, delta/p, 1/2}) and then
// 1/q at the midpoint of [1/(q0 delta), min{alpha, 1/p}). Throws InfeasibleError naming
// the violated inequality.
ExponentSet select_exponents(double p, double alpha, double beta, double delta);

// Names of every violated relation among the exponent constraints; empty when valid.
std::vector<std::string> exponent_violations(const ExponentSet& e);

struct DerivedConstants {
    Interval horizon;
    double M = 0.0;
    double K = 0.0;        // Young–Loève constant for (p, q0)
    double mu_star = 0.0;  // 1 / (2 M (K + 2)); +inf when M = 0
    std::function<double(double)> M_prime;  // N -> max{L_N, M_N, M}
};

DerivedConstants derive_constants(const CoefficientField& field, const ExponentSet& exponents,
                                  Interval horizon);

struct ProbeReport {
    // Largest lhs / rhs ratios seen (<= 1 means the declared constant holds).
    double g_lipschitz = 0.0;
    double gx_holder = 0.0;
    double g_time = 0.0;
    double f_lipschitz = 0.0;
    double f_growth = 0.0;
    double g_growth = 0.0;  // |g(t,x)| <= M (1 + |x|)
    std::size_t probes = 0;
    bool ok = false;
};

// Random probing of the declared constants over |x| <= radius and t in the horizon.
ProbeReport probe_field(const CoefficientField& field, const DerivedConstants& constants,
                        double radius, std::size_t probes = 1000, std::uint64_t seed = 7);

// t -> g(t, x_t) as a path in R^{d*m}.
SampledPath compose_diffusion(const CoefficientField& field, const SampledPath& x);

// |||g(., x.)|||_{q0-var} <= M (1 + |||x|||_{q-var}) on the window.
Certificate composed_variation_bound(const CoefficientField& field, const SampledPath& x,
                                     Interval window, const ExponentSet& exponents,
                                     const DerivedConstants& constants);

struct DifferenceCertificates {
    Certificate integrated;  // |||g(x) - g(y)|||_{q0} <= M'_N |||x-y|||_q (2 + |||x|||^d + |||y|||^d)
    Certificate four_point;  // worst random quadruple, lhs and rhs of the pointwise estimate
};

// Requires x and y to agree at the window start and sup norms <= N.
DifferenceCertificates composed_difference_bound(const CoefficientField& field,
                                                 const SampledPath& x, const SampledPath& y,
                                                 Interval window, const ExponentSet& exponents,
                                                 const DerivedConstants& constants, double N,
                                                 std::size_t quadruples = 200,
                                                 std::uint64_t seed = 11);

}  // namespace youngflow
