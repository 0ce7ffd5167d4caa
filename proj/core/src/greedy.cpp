#include "youngflow/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

constexpr int kMaxBisection = 200;
constexpr double kTimeTolerance = 1e-12;

double distance_pow(const double* a, const Vector& b, std::size_t dim, double p) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[static_cast<Eigen::Index>(k)];
        sq += d * d;
    }
    return dim == 1 ? std::pow(std::sqrt(sq), p) : std::pow(sq, 0.5 * p);
}

double distance_pow(const double* a, const double* b, std::size_t dim, double p) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
    }
    return dim == 1 ? std::pow(std::sqrt(sq), p) : std::pow(sq, 0.5 * p);
}

void require_parameters(double lambda, double mu, double p) {
    if (!(lambda > 0.0) || !(mu > 0.0)) {
        throw ParameterError("greedy times need lambda > 0 and mu > 0");
    }
    if (!(p >= 1.0)) {
        throw ParameterError("greedy times need p >= 1");
    }
}

}  // namespace

std::size_t GreedySequence::full_steps() const {
    return static_cast<std::size_t>(
        std::count_if(residuals.begin(), residuals.end(),
                      [](double r) { return std::abs(r) <= kGreedyResidualTolerance; }));
}

double next_greedy_time(const SampledPath& driver, double from, double lambda, double mu, double p) {
    return next_greedy_time(driver, from, driver.end_time(), lambda, mu, p);
}

double next_greedy_time(const SampledPath& driver, double from, double end, double lambda,
                        double mu, double p) {
    require_parameters(lambda, mu, p);
    require_window(driver, {from, end});
    if (!(end > from)) {
        throw ExhaustedError("greedy construction reached the end of the driver domain");
    }
    const SampledPath sub = driver.restrict({from, end});
    const std::size_t n = sub.size();
    const std::size_t dim = sub.dimension();

    // best[j] = |||w|||^p on [from, t_j] over vertex partitions, grown until kappa >= mu.
    std::vector<double> best(n, 0.0);
    auto kappa_at_vertex = [&](std::size_t j) {
        return std::pow(sub.time(j) - from, lambda) + std::pow(best[j], 1.0 / p);
    };
    std::size_t hit = n;
    for (std::size_t j = 1; j < n; ++j) {
        const double* xj = sub.row_data(j);
        double v = 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            v = std::max(v, best[i] + distance_pow(sub.row_data(i), xj, dim, p));
        }
        best[j] = v;
        if (kappa_at_vertex(j) >= mu) {
            hit = j;
            break;
        }
    }
    if (hit == n) {
        return end;
    }

    // Between vertices hit-1 and hit the moving endpoint is inserted by interpolation.
    const double t_lo = sub.time(hit - 1);
    const double t_hi = sub.time(hit);
    auto kappa = [&](double t) {
        const double w = (t - t_lo) / (t_hi - t_lo);
        const Vector x = ((1.0 - w) * sub.values().row(static_cast<Eigen::Index>(hit - 1)) +
                          w * sub.values().row(static_cast<Eigen::Index>(hit)))
                             .transpose();
        double v = 0.0;
        for (std::size_t i = 0; i < hit; ++i) {
            v = std::max(v, best[i] + distance_pow(sub.row_data(i), x, dim, p));
        }
        return std::pow(t - from, lambda) + std::pow(v, 1.0 / p);
    };
    double lo = t_lo;
    double hi = t_hi;
    for (int it = 0; it < kMaxBisection && hi - lo > kTimeTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (kappa(mid) >= mu) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Pick whichever bracket end has the smaller residual.
    const double r_lo = std::abs(kappa(lo) - mu);
    const double r_hi = std::abs(kappa(hi) - mu);
    double t = (r_lo < r_hi && lo > from) ? lo : hi;
    return std::min(t, end);
}

GreedySequence greedy_sequence(const SampledPath& driver, double start, double end, double lambda,
                               double mu, double p) {
    require_parameters(lambda, mu, p);
    if (!(start < end)) {
        throw DomainError("greedy sequence needs start < end");
    }
    require_window(driver, {start, end});
    GreedySequence seq;
    seq.lambda = lambda;
    seq.mu = mu;
    seq.p = p;
    seq.times.push_back(start);
    double tau = start;
    while (tau < end) {
        const double next = next_greedy_time(driver, tau, end, lambda, mu, p);
        if (!(next > tau)) {
            std::ostringstream os;
            os << "greedy step from " << tau << " is below time resolution (mu = " << mu << ")";
            throw ParameterError(os.str());
        }
        const double residual =
            std::pow(next - tau, lambda) + p_variation(driver, p, {tau, next}) - mu;
        seq.times.push_back(next);
        seq.residuals.push_back(std::isfinite(residual) ? residual
                                                        : -std::numeric_limits<double>::infinity());
        tau = next;
    }
    return seq;
}

double greedy_count_estimate(double window_length, double driver_variation, double lambda,
                             double mu, double p_prime) {
    return std::pow(2.0, p_prime - 1.0) / std::pow(mu, p_prime) *
           (std::pow(window_length, p_prime * lambda) + std::pow(driver_variation, p_prime));
}

CountBound count_bound(const SampledPath& driver, Interval window, double lambda, double mu,
                       double p, double p_prime) {
    require_parameters(lambda, mu, p);
    if (!(p_prime >= std::max(p, 1.0 / lambda))) {
        std::ostringstream os;
        os << "p' = " << p_prime << " must be >= max(p, 1/lambda) = " << std::max(p, 1.0 / lambda);
        throw ParameterError(os.str());
    }
    require_window(driver, window);
    CountBound out;
    out.p_prime = p_prime;
    if (!(window.hi > window.lo)) {
        return out;
    }
    const double variation = p_variation(driver, p, window);
    out.bound = greedy_count_estimate(window.length(), variation, lambda, mu, p_prime);
    const GreedySequence seq = greedy_sequence(driver, window.lo, window.hi, lambda, mu, p);
    out.actual = seq.full_steps();
    out.total_intervals = seq.steps();
    return out;
}

}  // namespace youngflow
