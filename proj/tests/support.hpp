#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "youngflow/paths.hpp"

namespace youngflow::testing {

inline SampledPath random_walk(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                               double lo = 0.0, double hi = 1.0) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> gap(0.2, 1.0);
    std::vector<double> t(n);
    t[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) t[i] = t[i - 1] + gap(rng);
    for (auto& v : t) v = lo + (hi - lo) * v / t.back();
    if (n == 1) t[0] = lo;
    RowMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    x.row(0).setZero();
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                x(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(k)) + normal(rng);
        }
    }
    return SampledPath(std::move(t), std::move(x));
}

inline std::vector<double> grid(double lo, double hi, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    t.back() = hi;
    return t;
}

inline SampledPath scalar_fn(double lo, double hi, std::size_t n, double (*fn)(double)) {
    auto t = grid(lo, hi, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(t[i]);
    return SampledPath::scalar(std::move(t), v);
}

}  // namespace youngflow::testing
