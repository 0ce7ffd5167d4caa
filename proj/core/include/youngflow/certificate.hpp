#pragma once

#include <string>
#include <vector>

#include "youngflow/paths.hpp"

namespace youngflow {

// Outcome of checking one inequality lhs <= rhs on a window.
struct Certificate {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
    Interval window;
    std::string detail;
};

// Absolute slack allowed on every certified inequality.
inline constexpr double kCertificateTolerance = 1e-10;

inline Certificate make_certificate(std::string name, double lhs, double rhs, Interval window,
                                    std::string detail = {}) {
    const bool ok = lhs <= rhs + kCertificateTolerance;
    return {std::move(name), lhs, rhs, ok, window, std::move(detail)};
}

inline bool all_ok(const std::vector<Certificate>& certs) {
    for (const auto& c : certs) {
        if (!c.ok) return false;
    }
    return true;
}

}  // namespace youngflow
