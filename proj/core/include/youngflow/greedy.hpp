#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "youngflow/paths.hpp"

namespace youngflow {

// Residual tolerance of the defining equation on non-clamped steps.
inline constexpr double kGreedyResidualTolerance = 1e-8;

// Greedy times t_0 < t_1 < ... with (t_{i+1} - t_i)^lambda + |||w|||_{p-var,[t_i,t_{i+1}]} = mu.
// The last step may be clamped at the window end, in which case its residual is negative.
struct GreedySequence {
    double lambda = 0.0;
    double mu = 0.0;
    double p = 0.0;
    std::vector<double> times;
    std::vector<double> residuals;  // one per step

    std::size_t steps() const { return residuals.size(); }
    bool clamped(std::size_t step) const { return residuals[step] < -kGreedyResidualTolerance; }
    // Steps on which the defining equation holds (not clamped at the end).
    std::size_t full_steps() const;
};

// Unique t* in (from, end] with (t* - from)^lambda + |||w|||_{p-var,[from,t*]} = mu,
// found by bisection on the interpolated path; returns `end` if the budget is not
// exhausted there. `end` defaults to the driver's last sample time.
double next_greedy_time(const SampledPath& driver, double from, double lambda, double mu, double p);
double next_greedy_time(const SampledPath& driver, double from, double end, double lambda,
                        double mu, double p);

GreedySequence greedy_sequence(const SampledPath& driver, double start, double end, double lambda,
                               double mu, double p);

struct CountBound {
    std::size_t actual = 0;  // full greedy intervals inside the window
    double bound = 0.0;      // 2^{p'-1} mu^{-p'} ((b-a)^{p' lambda} + |||w|||^{p'}_{p-var,[a,b]})
    double p_prime = 0.0;
    std::size_t total_intervals = 0;  // including a clamped tail

    bool holds() const { return static_cast<double>(actual) <= std::ceil(bound); }
};

CountBound count_bound(const SampledPath& driver, Interval window, double lambda, double mu,
                       double p, double p_prime);

// Right-hand side of the counting estimate alone.
double greedy_count_estimate(double window_length, double driver_variation, double lambda,
                             double mu, double p_prime);

}  // namespace youngflow
