#include "youngflow/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

constexpr double kProbeTolerance = 1e-9;


double tensor_distance(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sq += (a[k] - b[k]).squaredNorm();
    return std::sqrt(sq);
}

double ratio(double lhs, double rhs) {
    if (lhs <= kProbeTolerance * (1.0 + rhs)) return 0.0;
    return rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
}

// Uniform point of the cube inscribed in the ball of the given radius.
Vector random_point(std::mt19937_64& rng, std::size_t dim, double radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double side = radius / std::sqrt(static_cast<double>(dim));
    Vector x(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = side * u(rng);
    return x;
}

Vector constant_vector(std::size_t dim, double v) {
    return Vector::Constant(static_cast<Eigen::Index>(dim), v);
}

std::function<double(double)> constant_fn(double v) {
    return [v](double) { return v; };
}


}  // namespace

ControlFunction CoefficientField::time_control() const {
    return power_control(constants.time_lipschitz, 1.0);
}

double CoefficientField::b_norm(Interval horizon) const {
    const double alpha = constants.alpha;
    if (!constants.growth_b || !(horizon.hi > horizon.lo)) return 0.0;
    const double r = 1.0 / (1.0 - alpha);
    constexpr int n = 2048;  // even
    const double h = horizon.length() / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * std::pow(std::abs(constants.growth_b(horizon.lo + i * h)), r);
    }
    return std::pow(acc * h / 3.0, 1.0 / r);
}

CoefficientField time_reversed(const CoefficientField& field, double pivot) {
    CoefficientField out = field;
    out.name = field.name + "-reversed";
    auto f = field.drift;
    auto g = field.diffusion;
    auto gx = field.diffusion_jacobian;
    out.drift = [f, pivot](double u, const Vector& x) -> Vector { return -f(pivot - u, x); };
    out.diffusion = [g, pivot](double u, const Vector& x) { return g(pivot - u, x); };
    if (gx) {
        out.diffusion_jacobian = [gx, pivot](double u, const Vector& x) { return gx(pivot - u, x); };
    }
    if (auto b = field.constants.growth_b) {
        out.constants.growth_b = [b, pivot](double u) { return b(pivot - u); };
    }
    return out;
}

CoefficientField linear_field(std::size_t dim, double a, double b0, double c, double d0,
                              double alpha) {
    CoefficientField field;
    field.name = "linear";
    field.state_dim = dim;
    field.noise_dim = 1;
    field.drift = [a, b0, dim](double, const Vector& x) -> Vector {
        return a * x + constant_vector(dim, b0);
    };
    field.diffusion = [c, d0, dim](double, const Vector& x) -> Matrix {
        return c * x + constant_vector(dim, d0);
    };
    field.diffusion_jacobian = [c, dim](double, const Vector&) {
        std::vector<Matrix> out(dim, Matrix::Zero(static_cast<Eigen::Index>(dim), 1));
        for (std::size_t k = 0; k < dim; ++k) out[k](static_cast<Eigen::Index>(k), 0) = c;
        return out;
    };
    auto& k = field.constants;
    k.lipschitz_g = std::abs(c);
    k.holder_gx = constant_fn(0.0);
    k.delta = 1.0;
    k.beta = 1.0;
    k.time_lipschitz = 0.0;
    k.lipschitz_f = constant_fn(std::abs(a));
    k.growth_a = std::abs(a);
    k.growth_b = constant_fn(std::abs(b0) * std::sqrt(static_cast<double>(dim)));
    k.alpha = alpha;
    return field;
}

CoefficientField bounded_smooth_field(std::size_t dim, double kf, double sigma, double alpha) {
    CoefficientField field;
    field.name = "bounded-smooth";
    field.state_dim = dim;
    field.noise_dim = 1;
    field.drift = [kf](double, const Vector& x) -> Vector { return -kf * x.array().tanh().matrix(); };
    field.diffusion = [sigma](double, const Vector& x) -> Matrix {
        return sigma * 0.5 * (x.array().cos() + x.array().tanh()).matrix();
    };
    field.diffusion_jacobian = [sigma, dim](double, const Vector& x) {
        std::vector<Matrix> out(dim, Matrix::Zero(static_cast<Eigen::Index>(dim), 1));
        for (std::size_t k = 0; k < dim; ++k) {
            const double v = x[static_cast<Eigen::Index>(k)];
            const double sech = 1.0 / std::cosh(v);
            out[k](static_cast<Eigen::Index>(k), 0) = sigma * 0.5 * (-std::sin(v) + sech * sech);
        }
        return out;
    };
    auto& k = field.constants;
    // |phi'| <= 1 and |phi''| <= 1/2 + max|sech^2 tanh| = 1/2 + 2/(3 sqrt 3) < 0.89
    // for phi = (cos + tanh) / 2.
    k.lipschitz_g = std::abs(sigma);
    k.holder_gx = constant_fn(0.89 * std::abs(sigma));
    k.delta = 1.0;
    k.beta = 1.0;
    k.time_lipschitz = 0.0;
    k.lipschitz_f = constant_fn(std::abs(kf));
    k.growth_a = std::abs(kf);
    k.growth_b = constant_fn(0.0);
    k.alpha = alpha;
    return field;
}

CoefficientField time_varying_field(std::size_t dim, double amp, double sigma, double alpha) {
    CoefficientField field;
    field.name = "time-varying";
    field.state_dim = dim;
    field.noise_dim = 1;
    field.drift = [amp, dim](double t, const Vector& x) -> Vector {
        return -x + constant_vector(dim, amp * std::sin(t));
    };
    field.diffusion = [sigma](double t, const Vector& x) -> Matrix {
        return sigma * (std::cos(t) * x.array().tanh() + 0.5).matrix();
    };
    field.diffusion_jacobian = [sigma, dim](double t, const Vector& x) {
        std::vector<Matrix> out(dim, Matrix::Zero(static_cast<Eigen::Index>(dim), 1));
        for (std::size_t k = 0; k < dim; ++k) {
            const double sech = 1.0 / std::cosh(x[static_cast<Eigen::Index>(k)]);
            out[k](static_cast<Eigen::Index>(k), 0) = sigma * std::cos(t) * sech * sech;
        }
        return out;
    };
    const double root_d = std::sqrt(static_cast<double>(dim));
    auto& k = field.constants;
    // max |(sech^2)'| = 4 / (3 sqrt 3) < 0.77; |cos t - cos s| <= |t - s| for both g and g_x.
    k.lipschitz_g = std::abs(sigma);
    k.holder_gx = constant_fn(0.77 * std::abs(sigma));
    k.delta = 1.0;
    k.beta = 1.0;
    k.time_lipschitz = 2.0 * std::abs(sigma) * root_d;
    k.lipschitz_f = constant_fn(1.0);
    k.growth_a = 1.0;
    k.growth_b = [amp, root_d](double t) { return std::abs(amp * std::sin(t)) * root_d; };
    k.alpha = alpha;
    return field;
}

std::vector<std::string> exponent_violations(const ExponentSet& e) {
    std::vector<std::string> out;
    auto need = [&out](bool ok, const char* what) {
        if (!ok) out.emplace_back(what);
    };
    need(e.p > 1.0 && e.p < 2.0, "1 < p < 2");
    need(e.alpha >= 0.5 && e.alpha < 1.0, "1/2 <= alpha < 1");
    need(e.beta > 0.0 && e.beta <= 1.0, "0 < beta <= 1");
    need(e.delta > 0.0 && e.delta <= 1.0, "0 < delta <= 1");
    need(e.delta > e.p - 1.0, "delta > p - 1");
    need(e.beta > 1.0 - 1.0 / e.p, "beta > 1 - 1/p");
    need(e.delta * e.alpha > 1.0 - 1.0 / e.p, "delta alpha > 1 - 1/p");
    const double iq0 = 1.0 / e.q0;
    const double iq = 1.0 / e.q;
    need(1.0 - 1.0 / e.p < iq0, "1 - 1/p < 1/q0");
    need(iq0 < std::min({e.beta, e.delta * e.alpha, e.delta / e.p, 0.5}),
         "1/q0 < min{beta, delta alpha, delta/p, 1/2}");
    need(1.0 / (e.q0 * e.delta) <= iq, "1/(q0 delta) <= 1/q");
    need(iq < std::min(e.alpha, 1.0 / e.p), "1/q < min{alpha, 1/p}");
    need(1.0 / e.p + iq0 > 1.0, "1/p + 1/q0 > 1");
    need(e.q0 * e.beta > 1.0, "q0 beta > 1");
    need(e.q0 >= e.q0 * e.delta, "q0 >= q0 delta");
    need(e.q0 * e.delta >= e.q, "q0 delta >= q");
    need(e.q > e.p, "q > p");
    need(e.q * e.alpha > 1.0, "q alpha > 1");
    need(e.p_prime == std::max(e.p, 1.0 / e.alpha), "p' = max(p, 1/alpha)");
    return out;
}

ExponentSet select_exponents(double p, double alpha, double beta, double delta) {
    auto fail = [](const std::string& what) { throw InfeasibleError("infeasible exponents: " + what); };
    if (!(p > 1.0 && p < 2.0)) fail("1 < p < 2");
    if (!(alpha >= 0.5 && alpha < 1.0)) fail("1/2 <= alpha < 1");
    if (!(beta > 0.0 && beta <= 1.0)) fail("0 < beta <= 1");
    if (!(delta > 0.0 && delta <= 1.0)) fail("0 < delta <= 1");
    if (!(delta > p - 1.0)) fail("delta > p - 1");
    if (!(beta > 1.0 - 1.0 / p)) fail("beta > 1 - 1/p");
    if (!(delta * alpha > 1.0 - 1.0 / p)) fail("delta alpha > 1 - 1/p");

    const double lo0 = 1.0 - 1.0 / p;
    const double hi0 = std::min({beta, delta * alpha, delta / p, 0.5});
    ExponentSet e;
    e.p = p;
    e.alpha = alpha;
    e.beta = beta;
    e.delta = delta;
    e.p_prime = std::max(p, 1.0 / alpha);
    e.q0 = 1.0 / (0.5 * (lo0 + hi0));
    const double lo = 1.0 / (e.q0 * delta);
    const double hi = std::min(alpha, 1.0 / p);
    if (!(lo < hi)) fail("1/(q0 delta) < min{alpha, 1/p}");
    e.q = 1.0 / (0.5 * (lo + hi));
    // Midpoints can land within round-off of a closed bound; nudge rather than report.
    if (e.q0 * delta < e.q) e.q = e.q0 * delta;
    const auto violations = exponent_violations(e);
    if (!violations.empty()) fail(violations.front());
    return e;
}

DerivedConstants derive_constants(const CoefficientField& field, const ExponentSet& exponents,
                                  Interval horizon) {
    if (!(horizon.hi > horizon.lo)) throw DomainError("horizon must have positive length");
    const auto& k = field.constants;
    DerivedConstants out;
    out.horizon = horizon;
    const double g00 =
        field.diffusion(horizon.lo, Vector::Zero(static_cast<Eigen::Index>(field.state_dim))).norm();
    const double h_beta = std::pow(k.time_lipschitz * horizon.length(), k.beta);
    out.M = std::max({k.lipschitz_g, k.growth_a * std::pow(horizon.length(), 1.0 - k.alpha),
                      g00 + h_beta, field.b_norm(horizon)});
    out.K = exponents.drift_young().K;
    out.mu_star = out.M > 0.0 ? 1.0 / (2.0 * out.M * (out.K + 2.0))
                              : std::numeric_limits<double>::infinity();
    const double M = out.M;
    auto lf = k.lipschitz_f;
    auto mn = k.holder_gx;
    out.M_prime = [M, lf, mn](double N) {
        return std::max({lf ? lf(N) : 0.0, mn ? mn(N) : 0.0, M});
    };
    return out;
}

ProbeReport probe_field(const CoefficientField& field, const DerivedConstants& constants,
                        double radius, std::size_t probes, std::uint64_t seed) {
    const auto& k = field.constants;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Interval hz = constants.horizon;
    const std::size_t d = field.state_dim;
    ProbeReport r;
    r.probes = probes;
    const double L_N = k.lipschitz_f ? k.lipschitz_f(radius) : 0.0;
    const double M_N = k.holder_gx ? k.holder_gx(radius) : 0.0;
    for (std::size_t i = 0; i < probes; ++i) {
        double s = hz.lo + hz.length() * unit(rng);
        double t = hz.lo + hz.length() * unit(rng);
        if (s > t) std::swap(s, t);
        const Vector x = random_point(rng, d, radius);
        // Every other probe uses a nearby y so local constants are exercised.
        Vector y = random_point(rng, d, radius);
        if (i % 2 == 1) {
            y = x + 1e-3 * random_point(rng, d, 1.0);
            if (y.norm() > radius) y = x;
        }
        const double dxy = (x - y).norm();

        const Matrix gtx = field.diffusion(t, x);
        const Matrix gty = field.diffusion(t, y);
        r.g_lipschitz = std::max(r.g_lipschitz, ratio((gtx - gty).norm(), k.lipschitz_g * dxy));

        const Matrix gsx = field.diffusion(s, x);
        double time_lhs = (gtx - gsx).norm();
        if (field.diffusion_jacobian) {
            const auto jtx = field.diffusion_jacobian(t, x);
            const auto jty = field.diffusion_jacobian(t, y);
            const auto jsx = field.diffusion_jacobian(s, x);
            r.gx_holder = std::max(
                r.gx_holder, ratio(tensor_distance(jtx, jty), M_N * std::pow(dxy, k.delta)));
            time_lhs += tensor_distance(jtx, jsx);
        }
        r.g_time = std::max(r.g_time, ratio(time_lhs, std::pow(k.time_lipschitz * (t - s), k.beta)));

        const Vector ftx = field.drift(t, x);
        r.f_lipschitz = std::max(r.f_lipschitz, ratio((ftx - field.drift(t, y)).norm(), L_N * dxy));
        const double b = k.growth_b ? k.growth_b(t) : 0.0;
        r.f_growth = std::max(r.f_growth, ratio(ftx.norm(), k.growth_a * x.norm() + b));
        r.g_growth = std::max(r.g_growth, ratio(gtx.norm(), constants.M * (1.0 + x.norm())));
    }
    // Tight constants (linear fields) give ratios of 1 up to cancellation in the differences.
    constexpr double cap = 1.0 + 1e-9;
    r.ok = r.g_lipschitz <= cap && r.gx_holder <= cap && r.g_time <= cap && r.f_lipschitz <= cap &&
           r.f_growth <= cap && r.g_growth <= cap;
    return r;
}

SampledPath compose_diffusion(const CoefficientField& field, const SampledPath& x) {
    if (x.dimension() != field.state_dim) {
        std::ostringstream os;
        os << "path dimension " << x.dimension() << " does not match field state dimension "
           << field.state_dim;
        throw ShapeError(os.str());
    }
    const std::size_t d = field.state_dim;
    const std::size_t m = field.noise_dim;
    RowMatrix values(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(d * m));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Matrix g = field.diffusion(x.time(i), x.value(i));
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r * m + c)) =
                    g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return SampledPath(x.times(), std::move(values));
}

Certificate composed_variation_bound(const CoefficientField& field, const SampledPath& x,
                                     Interval window, const ExponentSet& exponents,
                                     const DerivedConstants& constants) {
    require_window(x, window);
    if (!(window.hi > window.lo)) return make_certificate("composed-variation", 0.0, constants.M, window);
    const SampledPath sub = x.restrict(window);
    const SampledPath gx = compose_diffusion(field, sub);
    const double lhs = p_variation(gx, exponents.q0);
    const double rhs = constants.M * (1.0 + p_variation(sub, exponents.q));
    return make_certificate("composed-variation", lhs, rhs, window);
}

DifferenceCertificates composed_difference_bound(const CoefficientField& field,
                                                 const SampledPath& x, const SampledPath& y,
                                                 Interval window, const ExponentSet& exponents,
                                                 const DerivedConstants& constants, double N,
                                                 std::size_t quadruples, std::uint64_t seed) {
    require_window(x, window);
    require_window(y, window);
    const double start_gap = (x.at(window.lo) - y.at(window.lo)).norm();
    if (start_gap > 1e-12 * (1.0 + x.at(window.lo).norm())) {
        std::ostringstream os;
        os << "paths differ by " << start_gap << " at the window start " << window.lo;
        throw PreconditionError(os.str());
    }
    const double slack = 1e-12 * (1.0 + N);
    if (sup_norm(x, window) > N + slack || sup_norm(y, window) > N + slack) {
        throw PreconditionError("sup norm of a path exceeds N");
    }
    DifferenceCertificates out;
    const double MN = constants.M_prime(N);
    if (!(window.hi > window.lo)) {
        out.integrated = make_certificate("composed-difference", 0.0, 0.0, window);
        out.four_point = make_certificate("four-point", 0.0, 0.0, window);
        return out;
    }
    const std::vector<double> grid = union_grid(x, y, window);
    const SampledPath xs = x.resample(grid);
    const SampledPath ys = y.resample(grid);
    const SampledPath gx = compose_diffusion(field, xs);
    const SampledPath gy = compose_diffusion(field, ys);
    const SampledPath gdiff(grid, gx.values() - gy.values());
    const SampledPath xydiff(grid, xs.values() - ys.values());
    const double q = exponents.q;
    const double lhs = p_variation(gdiff, exponents.q0);
    const double rhs = MN * p_variation(xydiff, q) *
                       (2.0 + std::pow(p_variation(xs, q), exponents.delta) +
                        std::pow(p_variation(ys, q), exponents.delta));
    out.integrated = make_certificate("composed-difference", lhs, rhs, window);

    // Pointwise estimate on random quadruples; the reported pair is the worst ratio.
    const auto& k = field.constants;
    const double M_N = k.holder_gx ? k.holder_gx(N) : 0.0;
    const ControlFunction h = field.time_control();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t d = field.state_dim;
    double worst = -1.0;
    double worst_lhs = 0.0;
    double worst_rhs = 0.0;
    for (std::size_t i = 0; i < quadruples; ++i) {
        double s = window.lo + window.length() * unit(rng);
        double t = window.lo + window.length() * unit(rng);
        if (s > t) std::swap(s, t);
        const double half = 0.5 * N;
        const Vector x1 = random_point(rng, d, half);
        const Vector x3 = random_point(rng, d, half);
        Vector x2 = random_point(rng, d, half);
        Vector x4 = random_point(rng, d, half);
        if (i % 2 == 1) {
            // Near-parallelogram configurations make the left side small and tight.
            const double eps = std::pow(10.0, -1.0 - 3.0 * unit(rng));
            x2 = x1 + eps * random_point(rng, d, half);
            x4 = x3 + (x2 - x1) + eps * eps * random_point(rng, d, half);
        }
        const double l = (field.diffusion(s, x1) - field.diffusion(s, x3) - field.diffusion(t, x2) +
                          field.diffusion(t, x4))
                             .norm();
        const double x24 = (x2 - x4).norm();
        const double r = k.lipschitz_g * (x1 - x2 - x3 + x4).norm() +
                         x24 * std::pow(h(s, t), k.beta) +
                         M_N * x24 *
                             (std::pow((x1 - x2).norm(), k.delta) + std::pow((x3 - x4).norm(), k.delta));
        const double rr = r > 0.0 ? l / r : (l > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (rr > worst) {
            worst = rr;
            worst_lhs = l;
            worst_rhs = r;
        }
    }
    out.four_point = make_certificate("four-point", worst_lhs, worst_rhs, window);
    return out;
}

}  // namespace youngflow
