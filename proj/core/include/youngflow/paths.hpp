#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace youngflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Closed time window [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double t) const { return lo <= t && t <= hi; }
};

// A continuous path in R^d given by its samples; between samples the path is
// the linear interpolant. Times are strictly increasing and all values finite.
class SampledPath {
public:
    SampledPath() = default;
    SampledPath(std::vector<double> times, RowMatrix values);

    static SampledPath scalar(std::vector<double> times, const std::vector<double>& values);
    // Samples t -> fn(t) on the given grid; fn returns a vector of length dim.
    static SampledPath tabulate(std::vector<double> times, std::size_t dim,
                                const std::function<Vector(double)>& fn);

    std::size_t size() const { return times_.size(); }
    std::size_t dimension() const { return static_cast<std::size_t>(values_.cols()); }
    const std::vector<double>& times() const { return times_; }
    const RowMatrix& values() const { return values_; }
    double time(std::size_t i) const { return times_[i]; }
    Vector value(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)).transpose(); }
    const double* row_data(std::size_t i) const {
        return values_.data() + static_cast<Eigen::Index>(i) * values_.cols();
    }

    double start_time() const { return times_.front(); }
    double end_time() const { return times_.back(); }
    Interval domain() const { return {times_.front(), times_.back()}; }
    Vector front() const { return value(0); }
    Vector back() const { return value(size() - 1); }

    // Value of the linear interpolant at t (t must lie in the domain).
    Vector at(double t) const;

    // Sub-path on the window; endpoints that are not sample times are inserted
    // by interpolation. The window must have positive length.
    SampledPath restrict(Interval window) const;

    // Interpolant evaluated on an arbitrary strictly increasing grid inside the domain.
    SampledPath resample(std::vector<double> grid) const;

    // u -> x(pivot - u), samples reordered so times stay increasing.
    SampledPath time_reversed(double pivot) const;

    // Samples whose times lie in [window.lo, window.hi], as an index range [first, last].
    std::pair<std::size_t, std::size_t> index_range(Interval window) const;

private:
    std::vector<double> times_;
    RowMatrix values_;
};

// (s, t) -> nonnegative real, zero on the diagonal and superadditive.
using ControlFunction = std::function<double(double, double)>;

struct WeightedControl {
    double coefficient = 1.0;
    ControlFunction control;
};

// Throws DomainError if the window is not inside the path domain (up to
// round-off) or is inverted.
void require_window(const SampledPath& path, Interval window);

// Exact discrete p-variation seminorm over vertex partitions of the window.
double p_variation(const SampledPath& path, double p, Interval window);
double p_variation(const SampledPath& path, double p);

// p-variation of samples[first..j] for every j in [first, last], computed in a
// single O(n^2) pass. Entry k holds the value on [t_first, t_{first+k}].
std::vector<double> p_variation_profile(const SampledPath& path, double p, std::size_t first,
                                        std::size_t last);

// Exhaustive enumeration over all sub-partitions; reference oracle for <= 20 points.
double p_variation_bruteforce(const SampledPath& path, double p, Interval window);

// max |x_t - x_s| / (t - s)^alpha over sample pairs of the window.
double holder_norm(const SampledPath& path, double alpha, Interval window);

// max |x_t| over the window.
double sup_norm(const SampledPath& path, Interval window);

// |x_a| + |||x|||_{p-var,[a,b]}
double p_variation_norm(const SampledPath& path, double p, Interval window);

SampledPath concatenate(const SampledPath& first, const SampledPath& second);

// x - y evaluated on the union of both sample grids within the common domain.
SampledPath difference(const SampledPath& x, const SampledPath& y);

// Merged sorted sample times of a and b inside the window, window endpoints included.
std::vector<double> union_grid(const SampledPath& a, const SampledPath& b, Interval window);

// Truncated whole-line metric sum_{n=1}^{cap} 2^{-n} r_n / (1 + r_n),
// r_n = ||w1 - w2||_{p-var,[-n,n]} with [-n,n] clamped to the common domain.
double metric_d(const SampledPath& w1, const SampledPath& w2, double p, int radius_cap);

// (s,t) -> |||path|||^p_{p-var,[s,t]}
ControlFunction variation_control(const SampledPath& path, double p);

// (s,t) -> scale * (t - s)^exponent; a control when exponent >= 1.
ControlFunction power_control(double scale, double exponent);

// Superadditivity and diagonal vanishing on all triples drawn from `times`.
bool is_control(const ControlFunction& control, std::span<const double> times, double tolerance);

// Checks the pointwise hypothesis |x_t - x_s| <= sum C_j w_j(s,t)^{1/p} on all
// sampled pairs and the conclusion |||x|||_{p-var,[s,t]} <= sum C_j w_j(s,t)^{1/p}
// on all sampled windows. Returns true only if both hold. O(n^3).
bool dominated_variation_bound(const SampledPath& path, double p,
                               std::span<const WeightedControl> controls, Interval window);

}  // namespace youngflow
