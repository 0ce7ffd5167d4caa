#include "youngflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json_convert.hpp"
#include "youngflow/drivers.hpp"
#include "youngflow/errors.hpp"
#include "youngflow/greedy.hpp"
#include "youngflow/path_io.hpp"

namespace youngflow {
namespace {

using detail::json;
using Path = std::vector<std::string>;

const std::map<std::string, std::set<std::string>>& field_params() {
    static const std::map<std::string, std::set<std::string>> table{
        {"zero", {"alpha"}},
        {"linear", {"a", "b0", "c", "d0", "alpha"}},
        {"bounded_smooth", {"kf", "sigma", "alpha"}},
        {"time_varying", {"amp", "sigma", "alpha"}},
    };
    return table;
}

const std::map<std::string, std::set<std::string>>& driver_params() {
    static const std::map<std::string, std::set<std::string>> table{
        {"fbm", {"hurst"}},
        {"linear", {"scale"}},
        {"sine", {"a", "amplitude"}},
        {"power", {"k"}},
        {"brownian_like", {"hurst", "levels", "amplitude"}},
    };
    return table;
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// Bundled scenarios are stored as config text and go through the same parser.
const std::map<std::string, std::string>& bundled_texts() {
    static const std::map<std::string, std::string> table{
        {"zero", R"({
  "scenario": "zero",
  "field": {"name": "zero", "dim": 1},
  "driver": {"kind": "sine", "horizon": [0, 1], "samples": 501, "params": {"a": 1, "amplitude": 1}},
  "exponents": "auto",
  "solve": {"t0": 0, "T": 1},
  "x0": [1],
  "x0_spread": 0.5,
  "seeds": [0, 1, 2]
})"},
        {"linear-sine", R"({
  "scenario": "linear-sine",
  "field": {"name": "linear", "dim": 1, "params": {"a": -0.5, "b0": 0.1, "c": 0.8, "d0": 0.05}},
  "driver": {"kind": "sine", "horizon": [0, 2], "samples": 2001, "params": {"a": 1, "amplitude": 1}},
  "exponents": "auto",
  "solve": {"t0": 0, "T": 2},
  "x0": [1],
  "x0_spread": 0.5,
  "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
})"},
        {"bounded-smooth-fbm", R"({
  "scenario": "bounded-smooth-fbm",
  "field": {"name": "bounded_smooth", "dim": 2, "params": {"kf": 0.5, "sigma": 0.6}},
  "driver": {"kind": "fbm", "horizon": [0, 1], "samples": 1025, "params": {"hurst": 0.75}},
  "exponents": "auto",
  "solve": {"t0": 0, "T": 1},
  "x0": [0.5, -0.3],
  "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
})"},
        {"time-varying-rough", R"({
  "scenario": "time-varying-rough",
  "field": {"name": "time_varying", "dim": 1, "params": {"amp": 0.5, "sigma": 0.5}},
  "driver": {"kind": "brownian_like", "horizon": [0, 1], "samples": 1025,
             "params": {"hurst": 0.8, "levels": 8, "amplitude": 0.5}},
  "exponents": "auto",
  "solve": {"t0": 0, "T": 1},
  "x0": [0.2],
  "x0_spread": 0.5,
  "seeds": [0, 1, 2]
})"},
        {"linear-fbm", R"({
  "scenario": "linear-fbm",
  "field": {"name": "linear", "dim": 1, "params": {"a": -0.3, "b0": 0, "c": 0.5, "d0": 0.1}},
  "driver": {"kind": "fbm", "horizon": [0, 1], "samples": 1025, "params": {"hurst": 0.75}},
  "exponents": "auto",
  "solve": {"t0": 0, "T": 1},
  "x0": [1],
  "seeds": [0, 1, 2]
})"},
    };
    return table;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const Path& path, const std::string& what) const {
        std::string where;
        for (const auto& key : path) where += (where.empty() ? "" : ".") + key;
        throw ConfigError(where.empty() ? what : where + ": " + what, line_of(path));
    }

    // Line of the last key of `path` found in document order; 1 when none is found.
    std::size_t line_of(const Path& path) const {
        std::size_t pos = 0;
        bool found = false;
        for (const auto& key : path) {
            const auto at = text_.find("\"" + key + "\"", pos);
            if (at == std::string::npos) break;
            pos = at;
            found = true;
        }
        if (!found) return 1;
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
    }

    void keys(const json& v, const Path& path, const std::set<std::string>& allowed) const {
        if (!v.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : v.items()) {
            if (!allowed.count(key)) {
                Path sub = path;
                sub.push_back(key);
                fail(sub, "unknown key");
            }
        }
    }

    double real(const json& v, const Path& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(path, "expected a finite number");
        return x;
    }

    double positive(const json& v, const Path& path) const {
        const double x = real(v, path);
        if (!(x > 0.0)) fail(path, "expected a positive number");
        return x;
    }

    std::uint64_t count(const json& v, const Path& path) const {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        fail(path, "expected a nonnegative integer");
    }

    std::string string(const json& v, const Path& path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> reals(const json& v, const Path& path) const {
        if (!v.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) out.push_back(real(x, path));
        return out;
    }

    std::map<std::string, double> params(const json& v, const Path& path,
                                         const std::set<std::string>& allowed) const {
        keys(v, path, allowed);
        std::map<std::string, double> out;
        for (const auto& [key, value] : v.items()) {
            Path sub = path;
            sub.push_back(key);
            out[key] = real(value, sub);
        }
        return out;
    }

    void apply(ExperimentConfig& c, const json& root) const;

private:
    void apply_field(ExperimentConfig& c, const json& v) const;
    void apply_driver(ExperimentConfig& c, const json& v) const;
    void apply_exponents(ExperimentConfig& c, const json& v) const;
    void apply_solve(ExperimentConfig& c, const json& v) const;
    void apply_flow(ExperimentConfig& c, const json& v) const;
    void validate(const ExperimentConfig& c, const json& root) const;

    const std::string& text_;
};

void Parser::apply(ExperimentConfig& c, const json& root) const {
    keys(root, {}, {"scenario", "field", "driver", "exponents", "solve", "x0", "x0_spread", "flow",
                    "seeds", "output", "backward_tolerance", "concatenation_tolerance"});
    if (root.contains("scenario")) {
        const std::string name = string(root["scenario"], {"scenario"});
        if (bundled_texts().count(name)) {
            c = bundled_scenario(name);
        } else if (!root.contains("field") || !root.contains("driver")) {
            fail({"scenario"}, "'" + name + "' is not a bundled scenario and no field/driver is given");
        }
        c.scenario = name;
    } else if (!root.contains("field") || !root.contains("driver")) {
        fail({}, "config needs a bundled \"scenario\" or both \"field\" and \"driver\"");
    }
    if (root.contains("field")) apply_field(c, root["field"]);
    if (root.contains("driver")) apply_driver(c, root["driver"]);
    if (root.contains("exponents")) apply_exponents(c, root["exponents"]);
    if (root.contains("solve")) apply_solve(c, root["solve"]);
    if (root.contains("x0")) c.x0 = reals(root["x0"], {"x0"});
    if (root.contains("x0_spread")) {
        c.x0_spread = real(root["x0_spread"], {"x0_spread"});
        if (c.x0_spread < 0.0) fail({"x0_spread"}, "must be nonnegative");
    }
    if (root.contains("flow")) apply_flow(c, root["flow"]);
    if (root.contains("seeds")) {
        const json& s = root["seeds"];
        if (!s.is_array() || s.empty()) fail({"seeds"}, "expected a nonempty array of integers");
        c.seeds.clear();
        for (const auto& v : s) c.seeds.push_back(count(v, {"seeds"}));
        std::set<std::uint64_t> unique(c.seeds.begin(), c.seeds.end());
        if (unique.size() != c.seeds.size()) fail({"seeds"}, "duplicate seed");
    }
    if (root.contains("output")) c.output = string(root["output"], {"output"});
    if (root.contains("backward_tolerance"))
        c.backward_tolerance = positive(root["backward_tolerance"], {"backward_tolerance"});
    if (root.contains("concatenation_tolerance"))
        c.concatenation_tolerance = positive(root["concatenation_tolerance"], {"concatenation_tolerance"});
    validate(c, root);
}

void Parser::apply_field(ExperimentConfig& c, const json& v) const {
    keys(v, {"field"}, {"name", "dim", "params"});
    if (v.contains("name")) {
        const std::string name = string(v["name"], {"field", "name"});
        if (!field_params().count(name)) fail({"field", "name"}, "unknown coefficient field '" + name + "'");
        if (name != c.field.name) c.field.params.clear();
        c.field.name = name;
    }
    if (v.contains("dim")) {
        c.field.dim = count(v["dim"], {"field", "dim"});
        if (c.field.dim == 0) fail({"field", "dim"}, "must be at least 1");
    }
    if (v.contains("params")) {
        for (const auto& [k, x] : params(v["params"], {"field", "params"}, field_params().at(c.field.name)))
            c.field.params[k] = x;
    }
}

void Parser::apply_driver(ExperimentConfig& c, const json& v) const {
    keys(v, {"driver"}, {"kind", "horizon", "samples", "params"});
    if (v.contains("kind")) {
        const std::string kind = string(v["kind"], {"driver", "kind"});
        if (!driver_params().count(kind)) fail({"driver", "kind"}, "unknown driver kind '" + kind + "'");
        if (kind != c.driver.kind) c.driver.params.clear();
        c.driver.kind = kind;
    }
    if (v.contains("horizon")) {
        const auto h = reals(v["horizon"], {"driver", "horizon"});
        if (h.size() != 2 || !(h[0] < h[1])) fail({"driver", "horizon"}, "expected [lo, hi] with lo < hi");
        c.driver.horizon = {h[0], h[1]};
    }
    if (v.contains("samples")) {
        c.driver.samples = count(v["samples"], {"driver", "samples"});
        if (c.driver.samples < 2) fail({"driver", "samples"}, "need at least 2 samples");
    }
    if (v.contains("params")) {
        for (const auto& [k, x] : params(v["params"], {"driver", "params"}, driver_params().at(c.driver.kind)))
            c.driver.params[k] = x;
    }
}

void Parser::apply_exponents(ExperimentConfig& c, const json& v) const {
    if (v.is_string()) {
        if (v.get<std::string>() != "auto") fail({"exponents"}, "expected \"auto\" or an object");
        c.exponents = {};
        return;
    }
    keys(v, {"exponents"}, {"p", "alpha", "beta", "delta"});
    c.exponents = {};
    if (v.contains("p")) c.exponents.p = real(v["p"], {"exponents", "p"});
    if (v.contains("alpha")) c.exponents.alpha = real(v["alpha"], {"exponents", "alpha"});
    if (v.contains("beta")) c.exponents.beta = real(v["beta"], {"exponents", "beta"});
    if (v.contains("delta")) c.exponents.delta = real(v["delta"], {"exponents", "delta"});
}

void Parser::apply_solve(ExperimentConfig& c, const json& v) const {
    keys(v, {"solve"}, {"t0", "T", "picard_tol", "picard_max_iters", "shrink_factor", "mu",
                        "quadrature", "max_depth", "certificate_starts", "euler_warm_start"});
    if (v.contains("t0")) c.t0 = real(v["t0"], {"solve", "t0"});
    if (v.contains("T")) c.T = real(v["T"], {"solve", "T"});
    if (v.contains("picard_tol")) c.solve.picard_tol = positive(v["picard_tol"], {"solve", "picard_tol"});
    if (v.contains("picard_max_iters")) {
        const auto n = count(v["picard_max_iters"], {"solve", "picard_max_iters"});
        if (n == 0 || n > 100000) fail({"solve", "picard_max_iters"}, "expected 1..100000");
        c.solve.picard_max_iters = static_cast<int>(n);
    }
    if (v.contains("shrink_factor")) {
        c.solve.shrink_factor = real(v["shrink_factor"], {"solve", "shrink_factor"});
        if (!(c.solve.shrink_factor > 0.0 && c.solve.shrink_factor < 1.0))
            fail({"solve", "shrink_factor"}, "expected a value in (0, 1)");
    }
    if (v.contains("mu")) {
        if (v["mu"].is_null()) c.solve.mu_override.reset();
        else c.solve.mu_override = positive(v["mu"], {"solve", "mu"});
    }
    if (v.contains("quadrature")) {
        const std::string q = string(v["quadrature"], {"solve", "quadrature"});
        if (q == "trapezoid") c.solve.young_rule = Quadrature::trapezoid;
        else if (q == "left") c.solve.young_rule = Quadrature::left;
        else fail({"solve", "quadrature"}, "expected \"trapezoid\" or \"left\"");
    }
    if (v.contains("max_depth")) {
        const auto n = count(v["max_depth"], {"solve", "max_depth"});
        if (n > 60) fail({"solve", "max_depth"}, "expected at most 60");
        c.solve.max_depth = static_cast<int>(n);
    }
    if (v.contains("certificate_starts")) {
        c.solve.certificate_starts = count(v["certificate_starts"], {"solve", "certificate_starts"});
        if (c.solve.certificate_starts == 0) fail({"solve", "certificate_starts"}, "must be at least 1");
    }
    if (v.contains("euler_warm_start")) {
        if (!v["euler_warm_start"].is_boolean()) fail({"solve", "euler_warm_start"}, "expected true or false");
        c.solve.euler_warm_start = v["euler_warm_start"].get<bool>();
    }
}

void Parser::apply_flow(ExperimentConfig& c, const json& v) const {
    keys(v, {"flow"}, {"triples", "probes", "tolerance"});
    if (v.contains("triples")) {
        const json& t = v["triples"];
        if (!t.is_array()) fail({"flow", "triples"}, "expected an array of [s, u, t]");
        c.flow.triples.clear();
        for (const auto& triple : t) {
            const auto x = reals(triple, {"flow", "triples"});
            if (x.size() != 3) fail({"flow", "triples"}, "each triple needs exactly 3 times");
            c.flow.triples.push_back({x[0], x[1], x[2]});
        }
    }
    if (v.contains("probes")) c.flow.probes = count(v["probes"], {"flow", "probes"});
    if (v.contains("tolerance")) c.flow.tolerance = positive(v["tolerance"], {"flow", "tolerance"});
}

void Parser::validate(const ExperimentConfig& c, const json& root) const {
    const Path solve_path = root.contains("solve") ? Path{"solve"} : Path{"scenario"};
    if (!(c.t0 < c.T)) fail(solve_path, "need t0 < T");
    if (c.t0 < c.driver.horizon.lo || c.T > c.driver.horizon.hi)
        fail(solve_path, "[t0, T] must lie inside the driver horizon");
    if (c.x0.size() != c.field.dim)
        fail({root.contains("x0") ? "x0" : "field"}, "x0 has " + std::to_string(c.x0.size()) +
                                                          " entries but the field dimension is " +
                                                          std::to_string(c.field.dim));
    for (const auto& t : c.flow.triples) {
        for (double s : t) {
            if (s < c.t0 || s > c.T) fail({"flow", "triples"}, "flow times must lie in [t0, T]");
        }
    }
    if (c.driver.kind == "fbm") {
        FbmSpec spec;
        spec.hurst = param(c.driver.params, "hurst", 0.75);
        spec.horizon = c.driver.horizon.hi;
        spec.samples = c.driver.samples;
        if (c.driver.horizon.lo != 0.0) fail({"driver", "horizon"}, "fbm drivers start at 0");
        try {
            youngflow::validate(spec);
        } catch (const Error& e) {
            fail({"driver", "params", "hurst"}, e.what());
        }
    }
    try {
        make_exponents(c.exponents, c.field, c.driver);
    } catch (const Error& e) {
        fail({"exponents"}, e.what());
    }
}

std::vector<Vector> seeded_points(const Vector& centre, double spread, std::size_t count,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Vector> out;
    for (std::size_t k = 0; k < count; ++k) {
        Vector x = centre;
        if (k > 0 || count == 1) {
            for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += spread * unit(rng);
        }
        out.push_back(x);
    }
    return out;
}

double snap(const SampledPath& path, double t) {
    const auto& ts = path.times();
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.end()) return ts.back();
    if (it != ts.begin() && t - *(it - 1) < *it - t) --it;
    return *it;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << text;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + static_cast<std::size_t>(
                                  std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        std::string what = e.what();
        const auto colon = what.find("parse error");
        if (colon != std::string::npos) what = what.substr(colon);
        throw ConfigError("invalid JSON: " + what, line);
    }
    ExperimentConfig c;
    Parser(text).apply(c, root);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + file.string(), 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> bundled_scenario_names() {
    return {"zero", "linear-sine", "bounded-smooth-fbm", "time-varying-rough", "linear-fbm"};
}

ExperimentConfig bundled_scenario(const std::string& name) {
    const auto it = bundled_texts().find(name);
    if (it == bundled_texts().end()) throw ParameterError("unknown scenario '" + name + "'");
    const json root = json::parse(it->second);
    ExperimentConfig c;
    json body = root;
    body.erase("scenario");
    Parser(it->second).apply(c, body);
    c.scenario = name;
    return c;
}

CoefficientField make_field(const FieldSpec& spec) {
    const auto& p = spec.params;
    const double alpha = param(p, "alpha", 0.75);
    if (spec.name == "zero") return linear_field(spec.dim, 0.0, 0.0, 0.0, 0.0, alpha);
    if (spec.name == "linear")
        return linear_field(spec.dim, param(p, "a", 0.0), param(p, "b0", 0.0), param(p, "c", 0.0),
                            param(p, "d0", 0.0), alpha);
    if (spec.name == "bounded_smooth")
        return bounded_smooth_field(spec.dim, param(p, "kf", 1.0), param(p, "sigma", 1.0), alpha);
    if (spec.name == "time_varying")
        return time_varying_field(spec.dim, param(p, "amp", 1.0), param(p, "sigma", 1.0), alpha);
    throw ParameterError("unknown coefficient field '" + spec.name + "'");
}

SampledPath make_driver(const DriverSpec& spec, std::uint64_t seed) {
    if (spec.kind == "fbm") {
        if (spec.horizon.lo != 0.0) throw ParameterError("fbm drivers start at 0");
        FbmSpec f;
        f.hurst = param(spec.params, "hurst", 0.75);
        f.horizon = spec.horizon.hi;
        f.samples = spec.samples;
        f.seed = seed;
        return fbm_sample(f);
    }
    return analytic_driver(spec.kind, spec.params,
                           uniform_grid(spec.horizon.lo, spec.horizon.hi, spec.samples));
}

ExponentSet make_exponents(const ExponentSpec& spec, const FieldSpec& field,
                           const DriverSpec& driver) {
    double p = 1.1;
    if (spec.p) {
        p = *spec.p;
    } else if (driver.kind == "fbm" || driver.kind == "brownian_like") {
        const double h = param(driver.params, "hurst", driver.kind == "fbm" ? 0.75 : 0.5);
        if (!(h > 0.5 && h <= 1.0))
            throw InfeasibleError("automatic p needs a Hurst parameter in (1/2, 1]");
        p = 1.0 / h + (2.0 - 1.0 / h) / 4.0;
    }
    const CoefficientField f = make_field(field);
    return select_exponents(p, spec.alpha.value_or(f.constants.alpha),
                            spec.beta.value_or(f.constants.beta),
                            spec.delta.value_or(f.constants.delta));
}

bool RunResult::ok() const {
    return std::all_of(seeds.begin(), seeds.end(), [](const SeedResult& s) { return s.ok(); });
}

Vector initial_value(const ExperimentConfig& config, std::uint64_t seed) {
    const Vector centre = Eigen::Map<const Vector>(config.x0.data(), static_cast<Eigen::Index>(config.x0.size()));
    return seeded_points(centre, config.x0_spread, 1, seed).front();
}

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
    SeedResult r;
    r.seed = seed;
    const CoefficientField field = make_field(config.field);
    const ExponentSet exps = make_exponents(config.exponents, config.field, config.driver);
    r.driver = make_driver(config.driver, seed);
    r.x0 = initial_value(config, seed);
    const Interval window{config.t0, config.T};
    SolveOptions quiet = config.solve;
    quiet.certify = false;

    try {
        SolveReport rep = solve_forward(field, r.driver, exps, config.t0, r.x0, config.T, config.solve);
        r.greedy_interval_count = rep.greedy.steps();
        const CountBound cb = count_bound(r.driver, window, exps.alpha, rep.mu, exps.p, exps.p_prime);
        r.count_bound = cb.bound;
        r.max_picard_iters = rep.max_iterations();
        r.max_fixed_point_residual = rep.max_residual();
        r.certificates = rep.certificates;
        r.certificates.push_back(make_certificate("count-bound", static_cast<double>(cb.actual),
                                                  std::ceil(cb.bound), window));
        r.gronwall_ok = true;
        bool seen_gronwall = false;
        for (const auto& c : rep.certificates) {
            if (c.name.rfind("gronwall", 0) == 0) {
                seen_gronwall = true;
                r.gronwall_ok = r.gronwall_ok && c.ok;
            }
        }
        r.gronwall_ok = r.gronwall_ok && seen_gronwall;
        const Certificate* growth = rep.find("growth");
        r.growth_ok = growth && growth->ok;

        // Terminal value x(T) solved back to t0.
        const SolveReport back =
            solve_backward(field, r.driver, exps, config.T, rep.solution.back(), config.t0, quiet);
        r.backward_error = (back.solution.front() - r.x0).norm();
        r.certificates.push_back(make_certificate("backward-roundtrip", r.backward_error,
                                                  config.backward_tolerance, window));

        // Split at the grid point nearest the midpoint and restart from the first half's end.
        const std::size_t k = rep.solution.size() / 2;
        const double mid = rep.solution.time(k);
        const SolveReport first = solve_forward(field, r.driver, exps, config.t0, r.x0, mid, quiet);
        const SolveReport second =
            solve_forward(field, r.driver, exps, mid, first.solution.back(), config.T, quiet);
        for (std::size_t i = 0; i < rep.solution.size(); ++i) {
            const Vector v = i <= k ? first.solution.value(i) : second.solution.value(i - k);
            r.concatenation_gap = std::max(r.concatenation_gap, (v - rep.solution.value(i)).norm());
        }
        r.certificates.push_back(make_certificate("concatenation", r.concatenation_gap,
                                                  config.concatenation_tolerance, window));

        std::vector<std::array<double, 3>> triples = config.flow.triples;
        if (triples.empty()) {
            const double a = config.t0;
            const double L = config.T - config.t0;
            triples = {{a, a + 0.5 * L, config.T},
                       {a + 0.25 * L, a + 0.75 * L, a + 0.5 * L},
                       {config.T, a + 0.25 * L, a + 0.5 * L}};
        }
        const std::vector<Vector> probes =
            seeded_points(r.x0, 0.5, std::max<std::size_t>(config.flow.probes, 1), seed ^ 0x9e3779b97f4a7c15ULL);
        double worst = 0.0;
        for (const auto& tr : triples) {
            const double s = snap(rep.solution, tr[0]);
            const double u = snap(rep.solution, tr[1]);
            const double t = snap(rep.solution, tr[2]);
            FlowCheckReport f =
                flow_axiom_check(field, r.driver, exps, s, u, t, probes, config.flow.tolerance, quiet);
            r.flow_identity_residual = std::max(r.flow_identity_residual, f.identity_residual);
            r.flow_inversion_residual = std::max(r.flow_inversion_residual, f.inversion_residual);
            r.flow_composition_residual = std::max(r.flow_composition_residual, f.composition_residual);
            worst = std::max({worst, f.identity_residual, f.inversion_residual, f.composition_residual});
            r.flows.push_back(std::move(f));
        }
        r.certificates.push_back(make_certificate("flow-axioms", worst, config.flow.tolerance, window));
        r.report = std::move(rep);
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

std::size_t thread_cap() {
    if (const char* env = std::getenv("YOUNGFLOW_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_experiment(const ExperimentConfig& config, std::size_t threads) {
    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());
    RunResult result;
    result.seeds.resize(seeds.size());
    const std::size_t workers = std::min(threads == 0 ? thread_cap() : threads, seeds.size());

    std::atomic<std::size_t> next{0};
    std::mutex failure_lock;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                result.seeds[i] = run_seed(config, seeds[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::string summary_csv(const RunResult& result) {
    std::string out =
        "seed,greedy_interval_count,count_bound,max_picard_iters,max_fixed_point_residual,"
        "gronwall_ok,growth_ok,flow_composition_residual\n";
    for (const auto& s : result.seeds) {
        out += std::to_string(s.seed) + "," + std::to_string(s.greedy_interval_count) + "," +
               format_number(s.count_bound) + "," + std::to_string(s.max_picard_iters) + "," +
               format_number(s.max_fixed_point_residual) + "," + (s.gronwall_ok ? "true" : "false") +
               "," + (s.growth_ok ? "true" : "false") + "," +
               format_number(s.flow_composition_residual) + "\n";
    }
    return out;
}

void write_artifacts(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "summary.csv", summary_csv(result));
    for (const auto& s : result.seeds) {
        const auto sub = dir / ("seed-" + std::to_string(s.seed));
        std::filesystem::create_directories(sub);
        write_path_csv(sub / "driver.csv", s.driver);
        json certs = json::array();
        for (const auto& c : s.certificates) certs.push_back(detail::to_object(c));
        json summary;
        summary["seed"] = s.seed;
        summary["ok"] = s.ok();
        if (!s.error.empty()) summary["error"] = s.error;
        summary["certificates"] = certs;
        write_text(sub / "certificates.json", detail::dump(summary));
        if (s.report) {
            write_path_csv(sub / "solution.csv", s.report->solution);
            write_text(sub / "report.json", detail::dump(detail::to_object(*s.report)));
        }
        json flows = json::array();
        for (const auto& f : s.flows) flows.push_back(detail::to_object(f));
        write_text(sub / "flow.json", detail::dump(flows));
    }
}

}  // namespace youngflow
