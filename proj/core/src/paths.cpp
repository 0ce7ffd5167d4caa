#include "youngflow/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

constexpr double kTimeSlack = 1e-12;

double slack(double t) { return kTimeSlack * std::max(1.0, std::abs(t)); }

double distance_pow(const double* a, const double* b, std::size_t dim, double p) {
    if (dim == 1) {
        return std::pow(std::abs(a[0] - b[0]), p);
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
    }
    return std::pow(sq, 0.5 * p);
}

double distance(const double* a, const double* b, std::size_t dim) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
    }
    return std::sqrt(sq);
}

void require_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "p-variation exponent must be >= 1, got " << p;
        throw ParameterError(os.str());
    }
}

// Clamps window endpoints that sit within round-off of the domain boundary.
Interval clamp_window(const SampledPath& path, Interval window) {
    require_window(path, window);
    return {std::max(window.lo, path.start_time()), std::min(window.hi, path.end_time())};
}

}  // namespace

SampledPath::SampledPath(std::vector<double> times, RowMatrix values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() < 2) {
        throw DataError("a sampled path needs at least two samples");
    }
    if (static_cast<std::size_t>(values_.rows()) != times_.size()) {
        throw ShapeError("times and values have different lengths");
    }
    if (values_.cols() < 1) {
        throw ShapeError("path dimension must be positive");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i])) {
            throw DataError("non-finite sample time");
        }
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            std::ostringstream os;
            os << "sample times must be strictly increasing (index " << i << ")";
            throw DataError(os.str());
        }
    }
    if (!values_.allFinite()) {
        throw DataError("non-finite sample value");
    }
}

SampledPath SampledPath::scalar(std::vector<double> times, const std::vector<double>& values) {
    RowMatrix v(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        v(static_cast<Eigen::Index>(i), 0) = values[i];
    }
    return SampledPath(std::move(times), std::move(v));
}

SampledPath SampledPath::tabulate(std::vector<double> times, std::size_t dim,
                                  const std::function<Vector(double)>& fn) {
    RowMatrix v(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Vector x = fn(times[i]);
        if (static_cast<std::size_t>(x.size()) != dim) {
            throw ShapeError("tabulated function returned a vector of the wrong size");
        }
        v.row(static_cast<Eigen::Index>(i)) = x.transpose();
    }
    return SampledPath(std::move(times), std::move(v));
}

Vector SampledPath::at(double t) const {
    if (t < start_time() - slack(start_time()) || t > end_time() + slack(end_time())) {
        std::ostringstream os;
        os << "time " << t << " outside path domain [" << start_time() << ", " << end_time() << "]";
        throw DomainError(os.str());
    }
    if (t <= times_.front()) {
        return value(0);
    }
    if (t >= times_.back()) {
        return value(size() - 1);
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    if (t == times_[lo]) {
        return value(lo);
    }
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return ((1.0 - w) * values_.row(static_cast<Eigen::Index>(lo)) +
            w * values_.row(static_cast<Eigen::Index>(hi)))
        .transpose();
}

std::pair<std::size_t, std::size_t> SampledPath::index_range(Interval window) const {
    const auto first = std::lower_bound(times_.begin(), times_.end(), window.lo);
    const auto last = std::upper_bound(times_.begin(), times_.end(), window.hi);
    return {static_cast<std::size_t>(first - times_.begin()),
            static_cast<std::size_t>(last - times_.begin()) - 1};
}

SampledPath SampledPath::restrict(Interval window) const {
    window = clamp_window(*this, window);
    if (!(window.hi > window.lo)) {
        throw DomainError("cannot restrict a path to a zero-width window");
    }
    std::vector<double> grid;
    grid.push_back(window.lo);
    const auto first = std::upper_bound(times_.begin(), times_.end(), window.lo);
    for (auto it = first; it != times_.end() && *it < window.hi; ++it) {
        grid.push_back(*it);
    }
    grid.push_back(window.hi);
    return resample(std::move(grid));
}

SampledPath SampledPath::resample(std::vector<double> grid) const {
    RowMatrix v(static_cast<Eigen::Index>(grid.size()), values_.cols());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (t < start_time() - slack(start_time()) || t > end_time() + slack(end_time())) {
            throw DomainError("resample grid leaves the path domain");
        }
        while (seg + 2 < times_.size() && times_[seg + 1] <= t) {
            ++seg;
        }
        const auto r = static_cast<Eigen::Index>(i);
        if (t <= times_[seg]) {
            v.row(r) = values_.row(static_cast<Eigen::Index>(seg));
        } else if (t >= times_[seg + 1]) {
            v.row(r) = values_.row(static_cast<Eigen::Index>(seg + 1));
        } else {
            const double w = (t - times_[seg]) / (times_[seg + 1] - times_[seg]);
            v.row(r) = (1.0 - w) * values_.row(static_cast<Eigen::Index>(seg)) +
                       w * values_.row(static_cast<Eigen::Index>(seg + 1));
        }
    }
    return SampledPath(std::move(grid), std::move(v));
}

SampledPath SampledPath::time_reversed(double pivot) const {
    const std::size_t n = size();
    std::vector<double> t(n);
    RowMatrix v(values_.rows(), values_.cols());
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = pivot - times_[n - 1 - i];
        v.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(n - 1 - i));
    }
    return SampledPath(std::move(t), std::move(v));
}

void require_window(const SampledPath& path, Interval window) {
    if (!(window.lo <= window.hi) || !std::isfinite(window.lo) || !std::isfinite(window.hi)) {
        throw DomainError("window must satisfy lo <= hi");
    }
    if (window.lo < path.start_time() - slack(path.start_time()) ||
        window.hi > path.end_time() + slack(path.end_time())) {
        std::ostringstream os;
        os << "window [" << window.lo << ", " << window.hi << "] outside path domain ["
           << path.start_time() << ", " << path.end_time() << "]";
        throw DomainError(os.str());
    }
}

std::vector<double> p_variation_profile(const SampledPath& path, double p, std::size_t first,
                                        std::size_t last) {
    require_p(p);
    if (first > last || last >= path.size()) {
        throw DomainError("invalid sample index range for p-variation profile");
    }
    const std::size_t n = last - first + 1;
    const std::size_t dim = path.dimension();
    std::vector<double> best(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double* xj = path.row_data(first + j);
        double v = 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            const double cand = best[i] + distance_pow(path.row_data(first + i), xj, dim, p);
            v = std::max(v, cand);
        }
        best[j] = v;
    }
    for (double& b : best) {
        b = std::pow(b, 1.0 / p);
    }
    return best;
}

double p_variation(const SampledPath& path, double p, Interval window) {
    require_p(p);
    window = clamp_window(path, window);
    if (!(window.hi > window.lo)) {
        return 0.0;
    }
    if (window.lo == path.start_time() && window.hi == path.end_time()) {
        return p_variation_profile(path, p, 0, path.size() - 1).back();
    }
    const SampledPath sub = path.restrict(window);
    return p_variation_profile(sub, p, 0, sub.size() - 1).back();
}

double p_variation(const SampledPath& path, double p) {
    return p_variation(path, p, path.domain());
}

double p_variation_bruteforce(const SampledPath& path, double p, Interval window) {
    require_p(p);
    window = clamp_window(path, window);
    if (!(window.hi > window.lo)) {
        return 0.0;
    }
    const SampledPath sub = path.restrict(window);
    const std::size_t n = sub.size();
    if (n > 20) {
        throw SizeError("brute-force p-variation is limited to 20 sample points");
    }
    const std::size_t dim = sub.dimension();
    const std::size_t interior = n - 2;
    double best = 0.0;
    std::vector<std::size_t> idx;
    idx.reserve(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
        idx.clear();
        idx.push_back(0);
        for (std::size_t k = 0; k < interior; ++k) {
            if (mask & (std::size_t{1} << k)) {
                idx.push_back(k + 1);
            }
        }
        idx.push_back(n - 1);
        double sum = 0.0;
        for (std::size_t k = 1; k < idx.size(); ++k) {
            sum += distance_pow(sub.row_data(idx[k - 1]), sub.row_data(idx[k]), dim, p);
        }
        best = std::max(best, sum);
    }
    return std::pow(best, 1.0 / p);
}

double holder_norm(const SampledPath& path, double alpha, Interval window) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("Hölder exponent must lie in (0, 1]");
    }
    window = clamp_window(path, window);
    if (!(window.hi > window.lo)) {
        return 0.0;
    }
    const SampledPath sub = path.restrict(window);
    const std::size_t dim = sub.dimension();
    double best = 0.0;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        for (std::size_t j = i + 1; j < sub.size(); ++j) {
            const double ratio = distance(sub.row_data(i), sub.row_data(j), dim) /
                                 std::pow(sub.time(j) - sub.time(i), alpha);
            best = std::max(best, ratio);
        }
    }
    return best;
}

double sup_norm(const SampledPath& path, Interval window) {
    window = clamp_window(path, window);
    double best = std::max(path.at(window.lo).norm(), path.at(window.hi).norm());
    const auto [first, last] = path.index_range(window);
    for (std::size_t i = first; i <= last && i < path.size(); ++i) {
        best = std::max(best, path.value(i).norm());
    }
    return best;
}

double p_variation_norm(const SampledPath& path, double p, Interval window) {
    return path.at(window.lo).norm() + p_variation(path, p, window);
}

SampledPath concatenate(const SampledPath& first, const SampledPath& second) {
    if (first.dimension() != second.dimension()) {
        throw ShapeError("cannot concatenate paths of different dimension");
    }
    const double t_join = first.end_time();
    if (std::abs(second.start_time() - t_join) > slack(t_join)) {
        throw JoinError("concatenation requires the second path to start where the first ends");
    }
    if ((first.back() - second.front()).norm() > 1e-12) {
        throw JoinError("concatenation requires matching values at the junction");
    }
    std::vector<double> times = first.times();
    times.insert(times.end(), second.times().begin() + 1, second.times().end());
    RowMatrix v(static_cast<Eigen::Index>(times.size()),
                static_cast<Eigen::Index>(first.dimension()));
    v.topRows(static_cast<Eigen::Index>(first.size())) = first.values();
    v.bottomRows(static_cast<Eigen::Index>(second.size() - 1)) =
        second.values().bottomRows(static_cast<Eigen::Index>(second.size() - 1));
    return SampledPath(std::move(times), std::move(v));
}

std::vector<double> union_grid(const SampledPath& a, const SampledPath& b, Interval window) {
    std::vector<double> grid;
    grid.reserve(a.size() + b.size() + 2);
    grid.push_back(window.lo);
    for (const SampledPath* path : {&a, &b}) {
        for (double t : path->times()) {
            if (t > window.lo && t < window.hi) {
                grid.push_back(t);
            }
        }
    }
    grid.push_back(window.hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

SampledPath difference(const SampledPath& x, const SampledPath& y) {
    if (x.dimension() != y.dimension()) {
        throw ShapeError("difference of paths with different dimension");
    }
    const Interval common{std::max(x.start_time(), y.start_time()),
                          std::min(x.end_time(), y.end_time())};
    if (!(common.hi > common.lo)) {
        throw DomainError("paths have no common domain");
    }
    const std::vector<double> grid = union_grid(x, y, common);
    const SampledPath xs = x.resample(grid);
    const SampledPath ys = y.resample(grid);
    return SampledPath(grid, xs.values() - ys.values());
}

double metric_d(const SampledPath& w1, const SampledPath& w2, double p, int radius_cap) {
    if (radius_cap < 1) {
        throw ParameterError("metric radius cap must be >= 1");
    }
    require_p(p);
    const SampledPath diff = difference(w1, w2);
    double total = 0.0;
    for (int n = 1; n <= radius_cap; ++n) {
        const Interval window{std::max(-static_cast<double>(n), diff.start_time()),
                              std::min(static_cast<double>(n), diff.end_time())};
        const double r = p_variation_norm(diff, p, window);
        total += std::ldexp(1.0, -n) * r / (1.0 + r);
    }
    return total;
}

ControlFunction variation_control(const SampledPath& path, double p) {
    return [path, p](double s, double t) {
        return std::pow(p_variation(path, p, {s, t}), p);
    };
}

ControlFunction power_control(double scale, double exponent) {
    return [scale, exponent](double s, double t) {
        return t > s ? scale * std::pow(t - s, exponent) : 0.0;
    };
}

bool is_control(const ControlFunction& control, std::span<const double> times, double tolerance) {
    for (double t : times) {
        if (std::abs(control(t, t)) > tolerance) {
            return false;
        }
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            const double sj = control(times[i], times[j]);
            if (sj < -tolerance) {
                return false;
            }
            for (std::size_t k = j + 1; k < times.size(); ++k) {
                if (sj + control(times[j], times[k]) > control(times[i], times[k]) + tolerance) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool dominated_variation_bound(const SampledPath& path, double p,
                               std::span<const WeightedControl> controls, Interval window) {
    require_p(p);
    window = clamp_window(path, window);
    if (!(window.hi > window.lo)) {
        return true;
    }
    const SampledPath sub = path.restrict(window);
    const std::size_t n = sub.size();
    const std::size_t dim = sub.dimension();
    auto dominating = [&](double s, double t) {
        double sum = 0.0;
        for (const auto& c : controls) {
            sum += c.coefficient * std::pow(std::max(0.0, c.control(s, t)), 1.0 / p);
        }
        return sum;
    };
    constexpr double kTol = 1e-10;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rhs = dominating(sub.time(i), sub.time(j));
            if (distance(sub.row_data(i), sub.row_data(j), dim) > rhs + kTol * (1.0 + rhs)) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::vector<double> prof = p_variation_profile(sub, p, i, n - 1);
        for (std::size_t k = 1; k < prof.size(); ++k) {
            const double rhs = dominating(sub.time(i), sub.time(i + k));
            if (prof[k] > rhs + kTol * (1.0 + rhs)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace youngflow
