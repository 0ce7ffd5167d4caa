#include "youngflow/young_integral.hpp"

#include <cmath>
#include <sstream>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

struct Aligned {
    SampledPath integrand;
    SampledPath driver;
    std::size_t rows = 0;  // d
    std::size_t cols = 0;  // m
};

std::size_t integrand_rows(const SampledPath& integrand, const SampledPath& driver) {
    const std::size_t m = driver.dimension();
    if (integrand.dimension() % m != 0) {
        std::ostringstream os;
        os << "integrand dimension " << integrand.dimension()
           << " is not a multiple of the driver dimension " << m;
        throw ShapeError(os.str());
    }
    return integrand.dimension() / m;
}

Aligned align(const SampledPath& integrand, const SampledPath& driver, Interval window) {
    const std::size_t d = integrand_rows(integrand, driver);
    require_window(integrand, window);
    require_window(driver, window);
    const std::vector<double> grid = union_grid(integrand, driver, window);
    return {integrand.resample(grid), driver.resample(grid), d, driver.dimension()};
}

// out += X (d x m, row-major) * dw
void accumulate(Vector& out, const double* x, const double* w_lo, const double* w_hi,
                std::size_t d, std::size_t m, double weight = 1.0) {
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += x[i * m + j] * (w_hi[j] - w_lo[j]);
        }
        out[static_cast<Eigen::Index>(i)] += weight * acc;
    }
}

Vector left_sum_strided(const Aligned& a, std::size_t stride) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(a.rows));
    const std::size_t n = a.driver.size();
    std::size_t i = 0;
    while (i + 1 < n) {
        const std::size_t next = std::min(i + stride, n - 1);
        accumulate(out, a.integrand.row_data(i), a.driver.row_data(i), a.driver.row_data(next),
                   a.rows, a.cols);
        i = next;
    }
    return out;
}

}  // namespace

YoungConstants YoungConstants::make(double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) {
        throw ParameterError("Young exponents must satisfy p, q >= 1");
    }
    const double theta = 1.0 / p + 1.0 / q;
    if (!(theta > 1.0)) {
        std::ostringstream os;
        os << "Young integral needs 1/p + 1/q > 1, got theta = " << theta;
        throw RegularityError(os.str());
    }
    return {p, q, theta, 1.0 / (1.0 - std::pow(2.0, 1.0 - theta))};
}

Vector rs_sum(const SampledPath& integrand, const SampledPath& driver, Interval window, Rule rule) {
    const std::size_t d = integrand_rows(integrand, driver);
    if (!(window.hi > window.lo)) {
        require_window(driver, window);
        return Vector::Zero(static_cast<Eigen::Index>(d));
    }
    const Aligned a = align(integrand, driver, window);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i + 1 < a.driver.size(); ++i) {
        const double* w_lo = a.driver.row_data(i);
        const double* w_hi = a.driver.row_data(i + 1);
        switch (rule) {
            case Rule::left:
                accumulate(out, a.integrand.row_data(i), w_lo, w_hi, a.rows, a.cols);
                break;
            case Rule::right:
                accumulate(out, a.integrand.row_data(i + 1), w_lo, w_hi, a.rows, a.cols);
                break;
            case Rule::midpoint:
                // The interpolant at the midpoint is the average of the endpoints.
                accumulate(out, a.integrand.row_data(i), w_lo, w_hi, a.rows, a.cols, 0.5);
                accumulate(out, a.integrand.row_data(i + 1), w_lo, w_hi, a.rows, a.cols, 0.5);
                break;
        }
    }
    return out;
}

SampledPath integral_path(const SampledPath& integrand, const SampledPath& driver, Interval window) {
    const Aligned a = align(integrand, driver, window);
    const std::size_t n = a.driver.size();
    RowMatrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a.rows));
    Vector acc = Vector::Zero(static_cast<Eigen::Index>(a.rows));
    values.row(0) = acc.transpose();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        accumulate(acc, a.integrand.row_data(i), a.driver.row_data(i), a.driver.row_data(i + 1),
                   a.rows, a.cols);
        values.row(static_cast<Eigen::Index>(i + 1)) = acc.transpose();
    }
    return SampledPath(a.driver.times(), std::move(values));
}

IntegralResult young_integral(const SampledPath& integrand, const SampledPath& driver,
                              Interval window, const YoungConstants& constants, double refine_tol) {
    if (!(refine_tol > 0.0)) {
        throw ParameterError("refine_tol must be positive");
    }
    // Re-validate: constants may have been built by hand.
    const YoungConstants k = YoungConstants::make(constants.p, constants.q);
    IntegralResult result;
    const std::size_t d = integrand_rows(integrand, driver);
    if (!(window.hi > window.lo)) {
        require_window(driver, window);
        result.value = Vector::Zero(static_cast<Eigen::Index>(d));
        result.partition_size = 1;
        result.coarsenings.push_back(result.value);
        return result;
    }
    const Aligned a = align(integrand, driver, window);
    const std::size_t intervals = a.driver.size() - 1;
    for (std::size_t stride = 1; stride <= intervals; stride *= 2) {
        result.coarsenings.push_back(left_sum_strided(a, stride));
    }
    result.value = result.coarsenings.front();
    result.partition_size = intervals;
    result.defect_bound =
        k.K * p_variation(a.integrand, k.q) * p_variation(a.driver, k.p);
    result.half_resolution_gap =
        result.coarsenings.size() > 1 ? (result.coarsenings[0] - result.coarsenings[1]).norm() : 0.0;
    result.converged = result.half_resolution_gap < refine_tol;
    return result;
}

YoungLoeveCertificate young_loeve_check(const SampledPath& integrand, const SampledPath& driver,
                                        Interval window, const YoungConstants& constants) {
    const YoungConstants k = YoungConstants::make(constants.p, constants.q);
    YoungLoeveCertificate cert;
    cert.window = window;
    if (!(window.hi > window.lo)) {
        cert.ok = true;
        cert.integral_variation_ok = true;
        return cert;
    }
    const Aligned a = align(integrand, driver, window);
    const SampledPath integral = integral_path(a.integrand, a.driver, window);
    Vector first_order = Vector::Zero(static_cast<Eigen::Index>(a.rows));
    accumulate(first_order, a.integrand.row_data(0), a.driver.row_data(0),
               a.driver.row_data(a.driver.size() - 1), a.rows, a.cols);
    const double x_var = p_variation(a.integrand, k.q);
    const double w_var = p_variation(a.driver, k.p);
    cert.defect = (integral.back() - first_order).norm();
    cert.bound = k.K * x_var * w_var;
    cert.ok = cert.defect <= cert.bound + 1e-10;
    cert.integral_variation = p_variation(integral, k.p);
    cert.integral_variation_bound = w_var * (a.integrand.front().norm() + (k.K + 1.0) * x_var);
    cert.integral_variation_ok = cert.integral_variation <= cert.integral_variation_bound + 1e-10;
    return cert;
}

Vector reverse_integral(const SampledPath& integrand, const SampledPath& driver, Interval window) {
    const std::size_t d = integrand_rows(integrand, driver);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(d));
    if (!(window.hi > window.lo)) {
        require_window(driver, window);
        return out;
    }
    const Aligned a = align(integrand, driver, window);
    for (std::size_t i = 0; i + 1 < a.driver.size(); ++i) {
        accumulate(out, a.integrand.row_data(i), a.driver.row_data(i + 1), a.driver.row_data(i),
                   a.rows, a.cols);
    }
    return out;
}

}  // namespace youngflow
