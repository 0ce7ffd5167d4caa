#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "youngflow/paths.hpp"

namespace youngflow {

struct FbmSpec {
    double hurst = 0.75;
    double horizon = 1.0;
    std::size_t samples = 1025;  // grid points including t = 0
    std::uint64_t seed = 0;
};

// Hurst parameters in [1/2, 1) are accepted; 1/2 gives Brownian motion.
void validate(const FbmSpec& spec);

// Fractional Brownian motion on the uniform grid t_i = i T / (n - 1), w_0 = 0.
// Increments are produced by the Durbin–Levinson recursion, i.e. the Cholesky
// factorisation of the Toeplitz increment covariance, in O(n^2) time and O(n) memory.
SampledPath fbm_sample(const FbmSpec& spec);

// Same map applied to caller-supplied standard normals (n - 1 of them).
SampledPath fbm_from_normals(const FbmSpec& spec, std::span<const double> normals);

// R(s,t) = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2
double fbm_covariance(double hurst, double s, double t);

// Uniform grid with n points on [lo, hi], endpoints exact.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// kind: "linear" (scale * t), "sine" (amplitude * sin(a t)), "power" (t^k),
// "brownian_like" (sum_j 2^{-j H} sin(2^j t + j), a deterministic H-Hölder path).
SampledPath analytic_driver(const std::string& kind, const std::map<std::string, double>& params,
                            std::vector<double> grid);

}  // namespace youngflow
