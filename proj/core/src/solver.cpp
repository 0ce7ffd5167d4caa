#include "youngflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

constexpr double kHypothesisTolerance = 1e-9;
const double kLn2 = std::log(2.0);

// Driver and field frozen on a grid; everything below works on row indices.
struct Grid {
    const CoefficientField* field = nullptr;
    std::vector<double> t;
    RowMatrix w;  // n x m
    std::size_t d = 0;
    std::size_t m = 0;
    Quadrature rule = Quadrature::trapezoid;

    std::size_t size() const { return t.size(); }
    SampledPath driver() const { return SampledPath(t, w); }
};

std::vector<double> solve_grid(const SampledPath& driver, double t0, double T,
                               const std::vector<double>& requested) {
    if (!(t0 < T)) {
        std::ostringstream os;
        os << "solve window [" << t0 << ", " << T << "] is empty or inverted";
        throw DomainError(os.str());
    }
    require_window(driver, {t0, T});
    const std::vector<double>& source = requested.empty() ? driver.times() : requested;
    if (!requested.empty()) {
        for (std::size_t i = 1; i < requested.size(); ++i) {
            if (!(requested[i] > requested[i - 1])) {
                throw ParameterError("solve grid must be strictly increasing");
            }
        }
        if (requested.front() > t0 + 1e-12 * (1.0 + std::abs(t0)) ||
            requested.back() < T - 1e-12 * (1.0 + std::abs(T))) {
            throw ParameterError("solve grid must cover [t0, T]");
        }
    }
    const double eps = 1e-12 * std::max({1.0, std::abs(t0), std::abs(T)});
    std::vector<double> out{t0};
    for (double s : source) {
        if (s > t0 + eps && s < T - eps) out.push_back(s);
    }
    out.push_back(T);
    return out;
}

Grid make_grid(const CoefficientField& field, const SampledPath& driver, std::vector<double> times,
               Quadrature rule) {
    if (driver.dimension() != field.noise_dim) {
        std::ostringstream os;
        os << "driver dimension " << driver.dimension() << " does not match field noise dimension "
           << field.noise_dim;
        throw ShapeError(os.str());
    }
    Grid g;
    g.field = &field;
    g.w = driver.resample(times).values();
    g.t = std::move(times);
    g.d = field.state_dim;
    g.m = field.noise_dim;
    g.rule = rule;
    return g;
}

struct Workspace {
    RowMatrix X;   // current iterate
    RowMatrix Y;   // F(X)
    RowMatrix fv;  // f(t_j, X_j)
    RowMatrix gv;  // g(t_j, X_j), row-major d x m per row
    RowMatrix I;
    RowMatrix J;

    explicit Workspace(const Grid& g) {
        const auto n = static_cast<Eigen::Index>(g.size());
        const auto d = static_cast<Eigen::Index>(g.d);
        X.setZero(n, d);
        Y.setZero(n, d);
        fv.setZero(n, d);
        gv.setZero(n, d * static_cast<Eigen::Index>(g.m));
    }
};

void evaluate(const Grid& g, Workspace& ws, std::size_t a, std::size_t b) {
    const auto d = static_cast<Eigen::Index>(g.d);
    const auto m = static_cast<Eigen::Index>(g.m);
    for (std::size_t j = a; j <= b; ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        const Vector x = ws.X.row(r).transpose();
        const Vector f = g.field->drift(g.t[j], x);
        const Matrix gm = g.field->diffusion(g.t[j], x);
        if (f.size() != d || gm.rows() != d || gm.cols() != m) {
            throw ShapeError("coefficient field returned values of the wrong shape");
        }
        ws.fv.row(r) = f.transpose();
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index k = 0; k < m; ++k) ws.gv(r, i * m + k) = gm(i, k);
        }
    }
}

// Y = F(X) on rows a..b with Y_a = X_a; optionally keeps I and J.
void apply_map(const Grid& g, Workspace& ws, std::size_t a, std::size_t b, bool keep_parts) {
    evaluate(g, ws, a, b);
    const auto d = static_cast<Eigen::Index>(g.d);
    const auto m = static_cast<Eigen::Index>(g.m);
    if (keep_parts) {
        ws.I.setZero(ws.X.rows(), d);
        ws.J.setZero(ws.X.rows(), d);
    }
    const auto ra = static_cast<Eigen::Index>(a);
    ws.Y.row(ra) = ws.X.row(ra);
    Vector drift(d);
    Vector young(d);
    for (std::size_t j = a; j < b; ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        const double dt = g.t[j + 1] - g.t[j];
        for (Eigen::Index i = 0; i < d; ++i) {
            drift[i] = 0.5 * (ws.fv(r, i) + ws.fv(r + 1, i)) * dt;
            double acc = 0.0;
            for (Eigen::Index k = 0; k < m; ++k) {
                const double dw = g.w(r + 1, k) - g.w(r, k);
                const double gk = g.rule == Quadrature::trapezoid
                                      ? 0.5 * (ws.gv(r, i * m + k) + ws.gv(r + 1, i * m + k))
                                      : ws.gv(r, i * m + k);
                acc += gk * dw;
            }
            young[i] = acc;
        }
        ws.Y.row(r + 1) = ws.Y.row(r) + (drift + young).transpose();
        if (keep_parts) {
            ws.I.row(r + 1) = ws.I.row(r) + drift.transpose();
            ws.J.row(r + 1) = ws.J.row(r) + young.transpose();
        }
    }
}

double sup_distance(const RowMatrix& A, const RowMatrix& B, std::size_t a, std::size_t b) {
    const auto ra = static_cast<Eigen::Index>(a);
    const auto len = static_cast<Eigen::Index>(b - a + 1);
    return (A.middleRows(ra, len) - B.middleRows(ra, len)).rowwise().norm().maxCoeff();
}

SampledPath rows_path(const Grid& g, const RowMatrix& X, std::size_t a, std::size_t b) {
    const auto ra = static_cast<Eigen::Index>(a);
    const auto len = static_cast<Eigen::Index>(b - a + 1);
    std::vector<double> t(g.t.begin() + static_cast<std::ptrdiff_t>(a),
                          g.t.begin() + static_cast<std::ptrdiff_t>(b + 1));
    return SampledPath(std::move(t), X.middleRows(ra, len));
}

// ||x||_q <= 2 |x0| + 1, using 1-variation as a cheap upper bound first.
bool in_ball(const Grid& g, const RowMatrix& X, std::size_t a, std::size_t b, double q) {
    const auto ra = static_cast<Eigen::Index>(a);
    const double x0 = X.row(ra).norm();
    const double radius = 2.0 * x0 + 1.0 + 1e-12;
    double one_var = 0.0;
    for (std::size_t j = a; j < b; ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        one_var += (X.row(r + 1) - X.row(r)).norm();
    }
    if (x0 + one_var <= radius) return true;
    return x0 + p_variation(rows_path(g, X, a, b), q) <= radius;
}

struct RangeStats {
    int iterations = 0;
    double residual = 0.0;
    bool ball_ok = true;
    std::size_t subdivisions = 0;
};

RangeStats picard(const Grid& g, Workspace& ws, std::size_t a, std::size_t b,
                  const SolveOptions& opts, double q, int depth, bool keep_initial) {
    const auto ra = static_cast<Eigen::Index>(a);
    const auto len = static_cast<Eigen::Index>(b - a + 1);
    if (!keep_initial) {
        for (std::size_t j = a + 1; j <= b; ++j) ws.X.row(static_cast<Eigen::Index>(j)) = ws.X.row(ra);
    }
    RangeStats stats;
    const double scale = 1.0 + ws.X.middleRows(ra, len).rowwise().norm().maxCoeff();
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < opts.picard_max_iters; ++it) {
        apply_map(g, ws, a, b, false);
        const double change = sup_distance(ws.Y, ws.X, a, b);
        ws.X.middleRows(ra, len) = ws.Y.middleRows(ra, len);
        ++stats.iterations;
        if (!std::isfinite(change)) break;
        stats.ball_ok = stats.ball_ok && in_ball(g, ws.X, a, b, q);
        const double current_scale =
            std::max(scale, 1.0 + ws.X.middleRows(ra, len).rowwise().norm().maxCoeff());
        if (change <= std::max(1e-3 * opts.picard_tol, 1e3 * eps * current_scale)) break;
    }
    apply_map(g, ws, a, b, false);
    stats.residual = sup_distance(ws.Y, ws.X, a, b);
    if (stats.residual <= opts.picard_tol) return stats;

    if (depth >= opts.max_depth || b - a < 2) {
        std::ostringstream os;
        os << "Picard iteration did not converge on [" << g.t[a] << ", " << g.t[b]
           << "] (residual " << stats.residual << ", depth " << depth << ")";
        throw SolverError(os.str(), g.t[a], g.t[b]);
    }
    const auto span = static_cast<double>(b - a);
    std::size_t mid = a + std::max<std::size_t>(1, static_cast<std::size_t>(opts.shrink_factor * span));
    mid = std::min(mid, b - 1);
    const RangeStats left = picard(g, ws, a, mid, opts, q, depth + 1, false);
    const RangeStats right = picard(g, ws, mid, b, opts, q, depth + 1, false);
    RangeStats out;
    out.iterations = stats.iterations + left.iterations + right.iterations;
    out.residual = std::max(left.residual, right.residual);
    out.ball_ok = left.ball_ok && right.ball_ok;
    out.subdivisions = 1 + left.subdivisions + right.subdivisions;
    return out;
}

void euler_fill(const Grid& g, RowMatrix& X, std::size_t a, std::size_t b) {
    const auto m = static_cast<Eigen::Index>(g.m);
    for (std::size_t j = a; j < b; ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        const Vector x = X.row(r).transpose();
        const Vector dw = (g.w.row(r + 1) - g.w.row(r)).transpose();
        const Matrix gm = g.field->diffusion(g.t[j], x);
        if (gm.cols() != m) throw ShapeError("diffusion has the wrong number of columns");
        X.row(r + 1) = (x + g.field->drift(g.t[j], x) * (g.t[j + 1] - g.t[j]) + gm * dw).transpose();
    }
}

// Largest grid index with t_i <= tau (up to round-off).
std::size_t snap_down(const std::vector<double>& t, double tau) {
    const double eps = 1e-12 * std::max(1.0, std::abs(tau));
    auto it = std::upper_bound(t.begin(), t.end(), tau + eps);
    return static_cast<std::size_t>(std::distance(t.begin(), it)) - 1;
}

double excess(double lhs, double rhs) {
    if (std::isinf(rhs) && rhs > 0) return -std::numeric_limits<double>::infinity();
    return (lhs - rhs) / (1.0 + std::abs(rhs));
}

Certificate hypothesis_certificate(std::string name, double lhs, double rhs, Interval window,
                                   std::string detail = {}) {
    Certificate c = make_certificate(std::move(name), lhs, rhs, window, std::move(detail));
    c.ok = lhs <= rhs + kHypothesisTolerance * (1.0 + std::abs(rhs));
    return c;
}

struct WorstPair {
    double score = -std::numeric_limits<double>::infinity();
    double lhs = 0.0;
    double rhs = 0.0;
    Interval window;
    bool seen = false;

    void offer(double l, double r, Interval w) {
        const double s = excess(l, r);
        if (!seen || s > score) {
            score = s;
            lhs = l;
            rhs = r;
            window = w;
            seen = true;
        }
    }
};

std::vector<std::size_t> sample_starts(std::size_t n, std::size_t starts) {
    std::vector<std::size_t> out;
    if (n < 2) return out;
    const std::size_t last = n - 2;
    if (starts == 0) starts = 1;
    if (last + 1 <= starts) {
        for (std::size_t i = 0; i <= last; ++i) out.push_back(i);
        return out;
    }
    for (std::size_t k = 0; k < starts; ++k) out.push_back(k * (last + 1) / starts);
    return out;
}

Certificate growth_impl(const SampledPath& x, const SampledPath& driver, const ExponentSet& e,
                        double M, double K, double t0, double until) {
    const Interval window{t0, until};
    const double lhs = p_variation_norm(x, e.q, window);
    const double var = p_variation(driver, e.p, window);
    const double c = M * (K + 2.0);
    const double pp = e.p_prime;
    const double C2 = std::pow(4.0 * c, pp) * kLn2;
    const double C1 = 2.0 * std::exp(C2 * std::pow(until - t0, pp * e.alpha));
    const double rhs = C1 * (1.0 + std::pow(until - t0, e.alpha)) * (1.0 + x.at(t0).norm()) *
                       (1.0 + var) * std::exp(C2 * std::pow(var, pp));
    std::ostringstream os;
    os << "C1=" << C1 << " C2=" << C2;
    return make_certificate("growth", lhs, rhs, window, os.str());
}

// Shared by forward and backward solves: the problem is already laid out on `g`.
SolveReport solve_on_grid(const Grid& g, const ExponentSet& exponents, const Vector& x0,
                          const SolveOptions& opts) {
    if (static_cast<std::size_t>(x0.size()) != g.d) {
        throw ShapeError("initial value dimension does not match the field");
    }
    if (!(opts.picard_tol > 0.0) || opts.picard_max_iters < 1 || !(opts.shrink_factor > 0.0) ||
        !(opts.shrink_factor < 1.0)) {
        throw ParameterError("invalid solve options");
    }
    const CoefficientField& field = *g.field;
    const std::size_t n = g.size();
    const double t0 = g.t.front();
    const double T = g.t.back();
    const DerivedConstants constants = derive_constants(field, exponents, {t0, T});

    SolveReport report;
    report.exponents = exponents;
    report.M = constants.M;
    report.K = constants.K;
    report.mu = opts.mu_override ? *opts.mu_override : constants.mu_star;
    report.t0 = t0;
    report.T = T;
    if (!(report.mu > 0.0)) throw ParameterError("mu must be positive");

    const SampledPath w = g.driver();
    report.greedy = greedy_sequence(w, t0, T, exponents.alpha, report.mu, exponents.p);

    std::vector<std::size_t> ends;
    for (std::size_t k = 1; k + 1 < report.greedy.times.size(); ++k) {
        const std::size_t idx = snap_down(g.t, report.greedy.times[k]);
        if (idx >= n - 1) break;
        if (ends.empty() ? idx > 0 : idx > ends.back()) ends.push_back(idx);
    }
    ends.push_back(n - 1);

    Workspace ws(g);
    ws.X.row(0) = x0.transpose();
    std::size_t a = 0;
    for (std::size_t b : ends) {
        if (opts.euler_warm_start) euler_fill(g, ws.X, a, b);
        const RangeStats stats = picard(g, ws, a, b, opts, exponents.q, 0, opts.euler_warm_start);
        report.windows.push_back({g.t[a], g.t[b]});
        report.iters_per_interval.push_back(stats.iterations);
        report.fixed_point_residuals.push_back(stats.residual);
        report.ball_ok.push_back(stats.ball_ok);
        report.subdivisions += stats.subdivisions;
        a = b;
    }
    report.solution = SampledPath(g.t, ws.X);

    if (!opts.certify) return report;

    auto& certs = report.certificates;
    certs.push_back(make_certificate("fixed-point", report.max_residual(), opts.picard_tol, {t0, T}));
    const auto ball_failures =
        static_cast<double>(std::count(report.ball_ok.begin(), report.ball_ok.end(), false));
    certs.push_back(make_certificate("ball", ball_failures, 0.0, {t0, T}));

    const GronwallReport gr = gronwall_certificate(solution_gronwall_input(report, field), w,
                                                   exponents.p, exponents.q, opts.certificate_starts);
    for (const auto& c : gr.all()) certs.push_back(c);

    certs.push_back(growth_impl(report.solution, w, exponents, report.M, report.K, t0, T));

    // Young–Loève on each solved interval for the integrand g(., x.).
    WorstPair yl0;
    WorstPair yl1;
    const YoungConstants young = exponents.drift_young();
    for (const Interval& win : report.windows) {
        const SampledPath xs = report.solution.restrict(win);
        const YoungLoeveCertificate yl =
            young_loeve_check(compose_diffusion(field, xs), w.restrict(win), win, young);
        yl0.offer(yl.defect, yl.bound, win);
        yl1.offer(yl.integral_variation, yl.integral_variation_bound, win);
    }
    certs.push_back(make_certificate("young-loeve", yl0.lhs, yl0.rhs, yl0.window));
    certs.push_back(make_certificate("young-loeve-variation", yl1.lhs, yl1.rhs, yl1.window));
    return report;
}

}  // namespace

int SolveReport::max_iterations() const {
    return iters_per_interval.empty()
               ? 0
               : *std::max_element(iters_per_interval.begin(), iters_per_interval.end());
}

double SolveReport::max_residual() const {
    return fixed_point_residuals.empty()
               ? 0.0
               : *std::max_element(fixed_point_residuals.begin(), fixed_point_residuals.end());
}

const Certificate* SolveReport::find(const std::string& name) const {
    for (const auto& c : certificates) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

FMap apply_F(const CoefficientField& field, const SampledPath& driver, const SampledPath& x,
             Interval window, Quadrature rule) {
    if (x.dimension() != field.state_dim) throw ShapeError("path dimension does not match the field");
    require_window(x, window);
    require_window(driver, window);
    if (!(window.hi > window.lo)) throw DomainError("apply_F needs a window of positive length");
    const SampledPath xs = x.restrict(window);
    Grid g = make_grid(field, driver, xs.times(), rule);
    Workspace ws(g);
    ws.X = xs.values();
    apply_map(g, ws, 0, g.size() - 1, true);
    return {SampledPath(g.t, ws.Y), SampledPath(g.t, ws.I), SampledPath(g.t, ws.J)};
}

Certificate fx_certificate(const CoefficientField& field, const SampledPath& driver,
                           const SampledPath& x, Interval window, const ExponentSet& exponents,
                           const DerivedConstants& constants, Quadrature rule) {
    const FMap F = apply_F(field, driver, x, window, rule);
    const double lhs = p_variation(F.value, exponents.q);
    const double rhs = constants.M * (constants.K + 2.0) *
                       (1.0 + p_variation_norm(x, exponents.q, window)) *
                       (std::pow(window.length(), exponents.alpha) +
                        p_variation(driver, exponents.p, window));
    return make_certificate("fx-bound", lhs, rhs, window);
}

IntervalSolution solve_interval(const CoefficientField& field, const SampledPath& driver,
                                const ExponentSet& exponents, double t0, const Vector& x0,
                                double t1, const SolveOptions& opts) {
    if (static_cast<std::size_t>(x0.size()) != field.state_dim) {
        throw ShapeError("initial value dimension does not match the field");
    }
    Grid g = make_grid(field, driver, solve_grid(driver, t0, t1, opts.grid), opts.young_rule);
    Workspace ws(g);
    ws.X.row(0) = x0.transpose();
    if (opts.euler_warm_start) euler_fill(g, ws.X, 0, g.size() - 1);
    const RangeStats stats =
        picard(g, ws, 0, g.size() - 1, opts, exponents.q, 0, opts.euler_warm_start);
    IntervalSolution out;
    out.path = SampledPath(g.t, ws.X);
    out.iterations = stats.iterations;
    out.residual = stats.residual;
    out.ball_ok = stats.ball_ok;
    out.subdivisions = stats.subdivisions;
    return out;
}

SolveReport solve_forward(const CoefficientField& field, const SampledPath& driver,
                          const ExponentSet& exponents, double t0, const Vector& x0, double T,
                          const SolveOptions& opts) {
    const Grid g = make_grid(field, driver, solve_grid(driver, t0, T, opts.grid), opts.young_rule);
    return solve_on_grid(g, exponents, x0, opts);
}

SolveReport solve_backward(const CoefficientField& field, const SampledPath& driver,
                           const ExponentSet& exponents, double T, const Vector& xT, double t0,
                           const SolveOptions& opts) {
    const Grid forward = make_grid(field, driver, solve_grid(driver, t0, T, opts.grid), opts.young_rule);
    const double pivot = t0 + T;
    const CoefficientField reversed = time_reversed(field, pivot);
    const std::size_t n = forward.size();

    // u = pivot - t; the driver rows are reused as they are, only reordered.
    Grid g;
    g.field = &reversed;
    g.d = forward.d;
    g.m = forward.m;
    g.rule = forward.rule;
    g.t.resize(n);
    g.w.resize(forward.w.rows(), forward.w.cols());
    for (std::size_t i = 0; i < n; ++i) {
        g.t[i] = pivot - forward.t[n - 1 - i];
        g.w.row(static_cast<Eigen::Index>(i)) = forward.w.row(static_cast<Eigen::Index>(n - 1 - i));
    }
    g.t.front() = t0;
    g.t.back() = T;
    for (std::size_t i = 1; i < n; ++i) {
        if (!(g.t[i] > g.t[i - 1])) throw ParameterError("reversed grid lost resolution");
    }

    SolveReport report = solve_on_grid(g, exponents, xT, opts);
    RowMatrix values(report.solution.values().rows(), report.solution.values().cols());
    for (std::size_t i = 0; i < n; ++i) {
        values.row(static_cast<Eigen::Index>(i)) =
            report.solution.values().row(static_cast<Eigen::Index>(n - 1 - i));
    }
    report.solution = SampledPath(forward.t, std::move(values));
    report.backward = true;
    return report;
}

SampledPath euler_solve(const CoefficientField& field, const SampledPath& driver, double t0,
                        const Vector& x0, double T, std::vector<double> grid) {
    if (static_cast<std::size_t>(x0.size()) != field.state_dim) {
        throw ShapeError("initial value dimension does not match the field");
    }
    const Grid g = make_grid(field, driver, solve_grid(driver, t0, T, grid), Quadrature::left);
    RowMatrix X(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.d));
    X.row(0) = x0.transpose();
    euler_fill(g, X, 0, g.size() - 1);
    return SampledPath(g.t, std::move(X));
}

double GronwallInput::c() const {
    return form == GronwallForm::increments ? std::max(a1, a2 * (K + 1.0)) : a1;
}

GronwallReport gronwall_certificate(const GronwallInput& input, const SampledPath& driver, double p,
                                    double q, std::size_t starts) {
    if (!(input.a1 >= 0.0) || !(input.a2 >= 0.0) || !(input.time_coeff >= 0.0) ||
        !(input.driver_coeff >= 0.0)) {
        throw ParameterError("Gronwall constants must be nonnegative");
    }
    const SampledPath& y = input.y;
    const Interval dom = y.domain();
    const SampledPath w = driver.resample(y.times());
    const std::size_t n = y.size();
    const std::size_t d = y.dimension();
    const std::size_t m = w.dimension();

    GronwallReport out;
    out.c = input.c();
    out.C = std::pow(4.0, p) * std::pow(out.c, p) * kLn2;

    auto A = [&](double s, double t, double wvar) {
        if (input.control) return input.control(s, t);
        return std::pow(2.0, q - 1.0) * (std::pow(input.time_coeff * (t - s), q) +
                                         std::pow(input.driver_coeff * wvar, q));
    };
    out.A0 = std::pow(A(dom.lo, dom.hi, p_variation(w, p)), 1.0 / q);

    // Cumulative trapezoid integrals of y du and y (x) dw for the increment form.
    RowMatrix Iy;
    RowMatrix Iw;
    if (input.form == GronwallForm::increments) {
        Iy.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        Iw.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d * m));
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const auto r = static_cast<Eigen::Index>(j);
            const auto avg = 0.5 * (y.values().row(r) + y.values().row(r + 1));
            Iy.row(r + 1) = Iy.row(r) + avg * (y.time(j + 1) - y.time(j));
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t k = 0; k < m; ++k) {
                    const auto ik = static_cast<Eigen::Index>(i * m + k);
                    const auto kk = static_cast<Eigen::Index>(k);
                    Iw(r + 1, ik) = Iw(r, ik) + avg[static_cast<Eigen::Index>(i)] *
                                                    (w.values()(r + 1, kk) - w.values()(r, kk));
                }
            }
        }
    }

    WorstPair hyp;
    WorstPair concl;
    for (std::size_t s : sample_starts(n, starts)) {
        const std::vector<double> yv = p_variation_profile(y, q, s, n - 1);
        const std::vector<double> wv = p_variation_profile(w, p, s, n - 1);
        const double ys = y.value(s).norm();
        const double ts = y.time(s);
        for (std::size_t j = s + 1; j < n; ++j) {
            const std::size_t k = j - s;
            const double tj = y.time(j);
            const double Aq = std::pow(A(ts, tj, wv[k]), 1.0 / q);
            double lhs = 0.0;
            double rhs = 0.0;
            if (input.form == GronwallForm::variation) {
                lhs = yv[k];
                rhs = Aq + input.a1 * (ys + yv[k]) * ((tj - ts) + wv[k]);
            } else {
                const auto rj = static_cast<Eigen::Index>(j);
                const auto rs = static_cast<Eigen::Index>(s);
                lhs = (y.values().row(rj) - y.values().row(rs)).norm();
                rhs = Aq + input.a1 * (Iy.row(rj) - Iy.row(rs)).norm() +
                      input.a2 * (Iw.row(rj) - Iw.row(rs)).norm();
            }
            hyp.offer(lhs, rhs, {ts, tj});
            const double bound = (2.0 * out.A0 + ys) *
                                 std::exp(out.C * (std::pow(tj - ts, p) + std::pow(wv[k], p)));
            concl.offer(yv[k], bound, {ts, tj});
        }
    }
    out.hypothesis = hypothesis_certificate("gronwall-hypothesis", hyp.lhs, hyp.rhs, hyp.window);
    out.conclusion = make_certificate("gronwall", concl.lhs, concl.rhs, concl.window);
    if (!out.hypothesis.ok) {
        std::ostringstream os;
        os << "hypothesis violated on [" << hyp.window.lo << ", " << hyp.window.hi << "]";
        out.conclusion.ok = false;
        out.conclusion.detail = os.str();
    }

    // Greedy times with parameters (1, 1/(2c)) drive the sup-norm remark and the recursion.
    std::vector<double> taus{dom.lo, dom.hi};
    if (out.c > 0.0) {
        const GreedySequence gs = greedy_sequence(w, dom.lo, dom.hi, 1.0, 0.5 / out.c, p);
        taus = gs.times;
        out.greedy_count = gs.full_steps();
    }
    const double y0 = y.front().norm();
    const double sup = sup_norm(y, dom);
    out.sup_bound = make_certificate(
        "gronwall-sup", sup,
        (2.0 * out.A0 + y0) * std::pow(2.0, static_cast<double>(out.greedy_count) + 1.0), dom);
    WorstPair rec;
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        const double lhs = 2.0 * out.A0 + y.at(taus[i + 1]).norm();
        const double rhs = 2.0 * (2.0 * out.A0 + y.at(taus[i]).norm());
        rec.offer(lhs, rhs, {taus[i], taus[i + 1]});
    }
    out.recursion = make_certificate("gronwall-recursion", rec.lhs, rec.rhs, rec.window);
    return out;
}

GronwallInput solution_gronwall_input(const SolveReport& report, const CoefficientField& field) {
    GronwallInput in;
    in.y = report.solution;
    in.form = GronwallForm::variation;
    in.K = report.K;
    in.a1 = std::max(field.constants.growth_a, report.M * (report.K + 1.0));
    double bmax = 0.0;
    if (field.constants.growth_b) {
        for (double t : report.solution.times()) bmax = std::max(bmax, field.constants.growth_b(t));
    }
    in.time_coeff = bmax;
    in.driver_coeff = report.M * (report.K + 2.0);
    return in;
}

Certificate growth_certificate(const SolveReport& report, const CoefficientField& field,
                               const SampledPath& driver, std::optional<double> until) {
    (void)field;
    const double end = until ? *until : report.T;
    if (!(end > report.t0) || end > report.T) throw DomainError("growth window outside the solve");
    SampledPath x = report.solution;
    SampledPath w = driver.resample(x.times());
    if (report.backward) {
        // Stated for the reversed forward problem; `until` is then a reversed time.
        const double pivot = report.t0 + report.T;
        x = x.time_reversed(pivot);
        w = w.time_reversed(pivot);
    }
    return growth_impl(x, w, report.exponents, report.M, report.K, x.start_time(), end);
}

double initial_value_lipschitz(const ExponentSet& exponents, const DerivedConstants& constants,
                               double N, Interval window, double driver_variation) {
    const double p = exponents.p;
    const double c = constants.M_prime(N) * (constants.K + 1.0) *
                     (2.0 + 2.0 * std::pow(N, exponents.delta));
    const double C = std::pow(4.0, p) * std::pow(c, p) * kLn2;
    return 1.0 + std::exp(C * (std::pow(window.length(), p) + std::pow(driver_variation, p)));
}

double driver_lipschitz(const ExponentSet& exponents, const DerivedConstants& constants, double N,
                        double solution_norm, Interval window, double driver_variation) {
    const double p = exponents.p;
    const double C5 = constants.M * (constants.K + 1.0) * (1.0 + solution_norm);
    const double c = constants.M_prime(N) * (constants.K + 1.0) *
                     (2.0 + 2.0 * std::pow(N, exponents.delta));
    const double C = std::pow(4.0, p) * std::pow(c, p) * kLn2;
    return 2.0 * C5 * std::exp(C * (std::pow(window.length(), p) + std::pow(driver_variation, p)));
}

}  // namespace youngflow
