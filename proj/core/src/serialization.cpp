#include "youngflow/serialization.hpp"

#include <charconv>

#include "json_convert.hpp"

namespace youngflow {
namespace detail {

json to_object(const GreedySequence& seq) {
    json j;
    j["lambda"] = number(seq.lambda);
    j["mu"] = number(seq.mu);
    j["times"] = numbers(seq.times);
    j["residuals"] = numbers(seq.residuals);
    return j;
}

json to_object(const Certificate& cert) {
    json j;
    j["name"] = cert.name;
    j["lhs"] = number(cert.lhs);
    j["rhs"] = number(cert.rhs);
    j["ok"] = cert.ok;
    j["window"] = window_json(cert.window);
    if (!cert.detail.empty()) j["detail"] = cert.detail;
    return j;
}

json to_object(const YoungLoeveCertificate& cert) {
    json j;
    j["defect"] = number(cert.defect);
    j["bound"] = number(cert.bound);
    j["ok"] = cert.ok;
    j["window"] = window_json(cert.window);
    j["integral_variation"] = number(cert.integral_variation);
    j["integral_variation_bound"] = number(cert.integral_variation_bound);
    j["integral_variation_ok"] = cert.integral_variation_ok;
    return j;
}

json to_object(const CountBound& bound) {
    json j;
    j["actual"] = bound.actual;
    j["bound"] = number(bound.bound);
    j["p_prime"] = number(bound.p_prime);
    j["total_intervals"] = bound.total_intervals;
    j["holds"] = bound.holds();
    return j;
}

json to_object(const SolveReport& report) {
    json j;
    j["direction"] = report.backward ? "backward" : "forward";
    j["window"] = window_json({report.t0, report.T});
    json e;
    e["p"] = number(report.exponents.p);
    e["q0"] = number(report.exponents.q0);
    e["q"] = number(report.exponents.q);
    e["p_prime"] = number(report.exponents.p_prime);
    e["alpha"] = number(report.exponents.alpha);
    e["beta"] = number(report.exponents.beta);
    e["delta"] = number(report.exponents.delta);
    j["exponents"] = e;
    j["M"] = number(report.M);
    j["K"] = number(report.K);
    j["mu"] = number(report.mu);
    j["greedy"] = to_object(report.greedy);
    json windows = json::array();
    for (const auto& w : report.windows) windows.push_back(window_json(w));
    j["intervals"] = windows;
    j["iters_per_interval"] = report.iters_per_interval;
    j["fixed_point_residuals"] = numbers(report.fixed_point_residuals);
    json ball = json::array();
    for (bool b : report.ball_ok) ball.push_back(b);
    j["ball_ok"] = ball;
    j["subdivisions"] = report.subdivisions;
    json certs = json::array();
    for (const auto& c : report.certificates) certs.push_back(to_object(c));
    j["certificates"] = certs;
    return j;
}

json to_object(const FlowCheckReport& report) {
    json j;
    j["times"] = json::array({number(report.s), number(report.u), number(report.t)});
    j["tolerance"] = number(report.tolerance);
    j["identity_residual"] = number(report.identity_residual);
    j["inversion_residual"] = number(report.inversion_residual);
    j["composition_residual"] = number(report.composition_residual);
    json table = json::array();
    for (const auto& row : report.continuity_table) {
        table.push_back({{"perturbation", number(row.perturbation)},
                         {"response", number(row.response)},
                         {"bound", number(row.bound)}});
    }
    j["continuity_table"] = table;
    j["ok"] = report.ok;
    return j;
}

json to_object(const FbmSpec& spec) {
    json j;
    j["hurst"] = number(spec.hurst);
    j["horizon"] = number(spec.horizon);
    j["samples"] = spec.samples;
    j["seed"] = spec.seed;
    return j;
}

}  // namespace detail

std::string to_json(const GreedySequence& seq) { return detail::dump(detail::to_object(seq)); }
std::string to_json(const Certificate& cert) { return detail::dump(detail::to_object(cert)); }
std::string to_json(const YoungLoeveCertificate& cert) { return detail::dump(detail::to_object(cert)); }
std::string to_json(const CountBound& bound) { return detail::dump(detail::to_object(bound)); }
std::string to_json(const SolveReport& report) { return detail::dump(detail::to_object(report)); }
std::string to_json(const FlowCheckReport& report) { return detail::dump(detail::to_object(report)); }
std::string to_json(const FbmSpec& spec) { return detail::dump(detail::to_object(spec)); }

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace youngflow
