#pragma once

#include <vector>

#include "youngflow/paths.hpp"

namespace youngflow {

// Exponent pair of a Young integral and the associated Young–Loève constant
// K = (1 - 2^{1 - theta})^{-1}, theta = 1/p + 1/q.
struct YoungConstants {
    double p = 0.0;  // driver regularity
    double q = 0.0;  // integrand regularity
    double theta = 0.0;
    double K = 0.0;

    // Throws RegularityError when theta <= 1 and ParameterError when p or q < 1.
    static YoungConstants make(double p, double q);
};

enum class Rule { left, right, midpoint };

// The integrand is a path in R^{d*m} read as a row-major d x m matrix; the
// driver is a path in R^m. Both are evaluated on the merged sample grid.

// Riemann–Stieltes sum sum_i x_{xi_i} (w_{t_{i+1}} - w_{t_i}).
Vector rs_sum(const SampledPath& integrand, const SampledPath& driver, Interval window,
              Rule rule = Rule::left);

// Cumulative left-point sums t -> int_{lo}^t x dw on the merged grid.
SampledPath integral_path(const SampledPath& integrand, const SampledPath& driver, Interval window);

struct IntegralResult {
    Vector value;
    std::size_t partition_size = 0;
    double defect_bound = 0.0;  // K |||x|||_{q-var} |||w|||_{p-var}
    // Values at the full grid, then every 2nd, 4th, ... grid point.
    std::vector<Vector> coarsenings;
    double half_resolution_gap = 0.0;
    bool converged = true;  // half_resolution_gap < refine_tol
};

IntegralResult young_integral(const SampledPath& integrand, const SampledPath& driver,
                              Interval window, const YoungConstants& constants,
                              double refine_tol = 1e-8);

struct YoungLoeveCertificate {
    Interval window;
    double defect = 0.0;  // |int_s^t x dw - x_s (w_t - w_s)|
    double bound = 0.0;   // K |||x|||_{q-var} |||w|||_{p-var}
    bool ok = false;
    // |||int x dw|||_{p-var} <= |||w|||_{p-var} (|x_a| + (K + 1) |||x|||_{q-var})
    double integral_variation = 0.0;
    double integral_variation_bound = 0.0;
    bool integral_variation_ok = false;
};

YoungLoeveCertificate young_loeve_check(const SampledPath& integrand, const SampledPath& driver,
                                        Interval window, const YoungConstants& constants);

// int_b^a x dw, the left-point sum taken with reversed increments.
Vector reverse_integral(const SampledPath& integrand, const SampledPath& driver, Interval window);

}  // namespace youngflow
