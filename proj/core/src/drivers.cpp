#include "youngflow/drivers.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// Autocovariance of unit-spacing fractional Gaussian noise.
double fgn_autocovariance(double hurst, std::size_t k) {
    const double h2 = 2.0 * hurst;
    const double kk = static_cast<double>(k);
    return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

}  // namespace

void validate(const FbmSpec& spec) {
    if (!(spec.hurst >= 0.5 && spec.hurst < 1.0)) {
        std::ostringstream os;
        os << "Hurst parameter " << spec.hurst << " outside [0.5, 1)";
        throw ParameterError(os.str());
    }
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) {
        throw ParameterError("fBm horizon must be positive");
    }
    if (spec.samples < 2) throw ParameterError("fBm needs at least 2 samples");
}

double fbm_covariance(double hurst, double s, double t) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw ParameterError("uniform grid needs n >= 2 and lo < hi");
    std::vector<double> t(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) t[i] = lo + step * static_cast<double>(i);
    t.back() = hi;
    return t;
}

SampledPath fbm_from_normals(const FbmSpec& spec, std::span<const double> normals) {
    validate(spec);
    const std::size_t m = spec.samples - 1;
    if (normals.size() != m) {
        throw ParameterError("fbm_from_normals needs samples - 1 standard normals");
    }
    std::vector<double> gamma(m);
    for (std::size_t k = 0; k < m; ++k) gamma[k] = fgn_autocovariance(spec.hurst, k);

    // Durbin–Levinson: X_k = sum_j phi_{k,j} X_{k-j} + sqrt(v_k) z_k.
    auto run = [&](double jitter, std::vector<double>& x) {
        std::vector<double> phi;
        std::vector<double> prev;
        phi.reserve(m);
        prev.reserve(m);
        double v = gamma[0] + jitter;
        if (!(v > 0.0)) return false;
        x[0] = std::sqrt(v) * normals[0];
        for (std::size_t k = 1; k < m; ++k) {
            double num = gamma[k];
            for (std::size_t j = 1; j < k; ++j) num -= prev[j - 1] * gamma[k - j];
            const double pkk = num / v;
            phi.assign(k, 0.0);
            for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - pkk * prev[k - j - 1];
            phi[k - 1] = pkk;
            v *= (1.0 - pkk * pkk);
            if (!(v > 0.0)) return false;
            double mean = 0.0;
            for (std::size_t j = 1; j <= k; ++j) mean += phi[j - 1] * x[k - j];
            x[k] = mean + std::sqrt(v) * normals[k];
            prev.swap(phi);
        }
        return true;
    };
    std::vector<double> x(m);
    if (!run(0.0, x) && !run(1e-12, x)) {
        throw Error("fBm covariance factorisation failed even with diagonal jitter");
    }

    const double dt = spec.horizon / static_cast<double>(m);
    const double scale = std::pow(dt, spec.hurst);
    std::vector<double> values(spec.samples, 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        acc += scale * x[k];
        values[k + 1] = acc;
    }
    return SampledPath::scalar(uniform_grid(0.0, spec.horizon, spec.samples), values);
}

SampledPath fbm_sample(const FbmSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(spec.samples - 1);
    for (double& v : z) v = normal(rng);
    return fbm_from_normals(spec, z);
}

SampledPath analytic_driver(const std::string& kind, const std::map<std::string, double>& params,
                            std::vector<double> grid) {
    std::function<double(double)> fn;
    if (kind == "linear") {
        const double scale = param(params, "scale", 1.0);
        fn = [scale](double t) { return scale * t; };
    } else if (kind == "sine") {
        const double a = param(params, "a", 1.0);
        const double amp = param(params, "amplitude", 1.0);
        fn = [a, amp](double t) { return amp * std::sin(a * t); };
    } else if (kind == "power") {
        const double k = param(params, "k", 2.0);
        fn = [k](double t) { return std::pow(t, k); };
    } else if (kind == "brownian_like") {
        const double h = param(params, "hurst", 0.75);
        const int levels = static_cast<int>(param(params, "levels", 12));
        const double amp = param(params, "amplitude", 1.0);
        fn = [h, levels, amp](double t) {
            double acc = 0.0;
            for (int j = 0; j < levels; ++j) {
                const double f = std::ldexp(1.0, j);
                acc += std::pow(f, -h) * std::sin(f * t + j);
            }
            return amp * acc;
        };
    } else {
        throw ParameterError("unknown analytic driver kind '" + kind + "'");
    }
    return SampledPath::tabulate(std::move(grid), 1, [&fn](double t) {
        Vector v(1);
        v[0] = fn(t);
        return v;
    });
}

}  // namespace youngflow
