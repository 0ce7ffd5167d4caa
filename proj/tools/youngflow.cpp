// youngflow command line: p-variation, Young integrals, greedy times, solves, flow checks,
// fBm drivers and batch verification. Exit status: 0 all certificates ok, 1 a certificate
// failed or the computation raised, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "youngflow/drivers.hpp"
#include "youngflow/errors.hpp"
#include "youngflow/experiment.hpp"
#include "youngflow/flow.hpp"
#include "youngflow/greedy.hpp"
#include "youngflow/path_io.hpp"
#include "youngflow/paths.hpp"
#include "youngflow/serialization.hpp"
#include "youngflow/solver.hpp"
#include "youngflow/young_integral.hpp"

namespace fs = std::filesystem;
using namespace youngflow;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand.
struct Common {
    std::vector<std::string> input;
    std::optional<double> p;
    std::optional<double> q;
    std::string window;
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--input", c.input, "Input CSV path(s), comma separated")->delimiter(',');
    cmd->add_option("--p", c.p, "Driver variation exponent");
    cmd->add_option("--q", c.q, "Integrand variation exponent");
    cmd->add_option("--window", c.window, "Time window a,b");
    cmd->add_option("--config", c.config, "JSON experiment config");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--seed", c.seed, "Seed");
}

std::vector<double> parse_reals(const std::string& text, std::size_t count, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": '" + text + "' is not a list of numbers");
        }
    }
    if (out.size() != count) {
        throw UsageError(std::string(flag) + " expects " + std::to_string(count) + " comma-separated numbers");
    }
    return out;
}

std::optional<Interval> parse_window(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto v = parse_reals(text, 2, "--window");
    if (!(v[0] <= v[1])) throw UsageError("--window needs a <= b");
    return Interval{v[0], v[1]};
}

SampledPath read_input(const Common& c, std::size_t index, const char* what) {
    if (c.input.size() <= index) throw UsageError(std::string("missing --input for the ") + what);
    return read_path_csv(fs::path(c.input[index]));
}

void write_file(const fs::path& file, const std::string& text) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << text;
}

ExperimentConfig load(const Common& c, const std::string& scenario) {
    if (!c.config.empty() && !scenario.empty()) throw UsageError("--config and --scenario are exclusive");
    if (!c.config.empty()) return load_config(c.config);
    if (!scenario.empty()) {
        try {
            return bundled_scenario(scenario);
        } catch (const ParameterError& e) {
            throw UsageError(e.what());
        }
    }
    throw UsageError("a --config file or a --scenario name is required");
}

void print_certificates(const std::vector<Certificate>& certs) {
    for (const auto& c : certs) {
        std::printf("%-24s %s  lhs=%s rhs=%s window=[%s,%s]\n", c.name.c_str(), c.ok ? "ok  " : "FAIL",
                    format_number(c.lhs).c_str(), format_number(c.rhs).c_str(),
                    format_number(c.window.lo).c_str(), format_number(c.window.hi).c_str());
    }
}

int cmd_pvar(const Common& c) {
    if (!c.p) throw UsageError("pvar needs --p");
    const SampledPath path = read_input(c, 0, "path");
    const Interval w = parse_window(c.window).value_or(path.domain());
    const double v = p_variation(path, *c.p, w);
    std::printf("%s\n", format_number(v).c_str());
    if (!c.out.empty()) {
        write_file(fs::path(c.out) / "pvar.json",
                   "{\n  \"p\": " + format_number(*c.p) + ",\n  \"window\": [" + format_number(w.lo) +
                       ", " + format_number(w.hi) + "],\n  \"value\": " + format_number(v) + "\n}\n");
    }
    return kOk;
}

int cmd_integrate(const Common& c) {
    const SampledPath x = read_input(c, 0, "integrand");
    const SampledPath w = read_input(c, 1, "driver");
    const Interval win = parse_window(c.window).value_or(
        Interval{std::max(x.start_time(), w.start_time()), std::min(x.end_time(), w.end_time())});
    const Vector value = rs_sum(x, w, win);
    std::string text = "{\n  \"value\": [";
    for (Eigen::Index i = 0; i < value.size(); ++i) text += (i ? ", " : "") + format_number(value[i]);
    text += "]";
    bool ok = true;
    if (c.p && c.q) {
        const auto k = YoungConstants::make(*c.p, *c.q);
        const auto cert = young_loeve_check(x, w, win, k);
        ok = cert.ok && cert.integral_variation_ok;
        std::string yl = to_json(cert);
        std::string indented;
        for (char ch : yl.substr(0, yl.size() - 1)) {
            indented += ch;
            if (ch == '\n') indented += "  ";
        }
        text += ",\n  \"K\": " + format_number(k.K) + ",\n  \"young_loeve\": " + indented;
    }
    text += "\n}\n";
    std::fputs(text.c_str(), stdout);
    if (!c.out.empty()) write_file(fs::path(c.out) / "integral.json", text);
    return ok ? kOk : kFailed;
}

int cmd_greedy(const Common& c, double lambda, double mu) {
    if (!c.p) throw UsageError("greedy needs --p");
    const SampledPath w = read_input(c, 0, "driver");
    const Interval win = parse_window(c.window).value_or(w.domain());
    const GreedySequence seq = greedy_sequence(w, win.lo, win.hi, lambda, mu, *c.p);
    const CountBound cb = count_bound(w, win, lambda, mu, *c.p, std::max(*c.p, 1.0 / lambda));
    const std::string text = to_json(seq);
    std::fputs(text.c_str(), stdout);
    if (!c.out.empty()) {
        write_file(fs::path(c.out) / "greedy.json", text);
        write_file(fs::path(c.out) / "count_bound.json", to_json(cb));
    }
    return cb.holds() ? kOk : kFailed;
}

struct SolveSetup {
    ExperimentConfig config;
    CoefficientField field;
    SampledPath driver;
    ExponentSet exponents;
    std::uint64_t seed = 0;
    Vector x0;
};

SolveSetup setup(const Common& c, const std::string& scenario) {
    SolveSetup s;
    s.config = load(c, scenario);
    s.seed = c.seed.value_or(s.config.seeds.front());
    if (auto w = parse_window(c.window)) {
        s.config.t0 = w->lo;
        s.config.T = w->hi;
    }
    if (c.p) s.config.exponents.p = *c.p;
    s.field = make_field(s.config.field);
    s.driver = c.input.empty() ? make_driver(s.config.driver, s.seed) : read_input(c, 0, "driver");
    try {
        s.exponents = make_exponents(s.config.exponents, s.config.field, s.config.driver);
    } catch (const InfeasibleError& e) {
        throw UsageError(e.what());
    }
    // Same seeded initial value as the batch runner.
    s.x0 = initial_value(s.config, s.seed);
    return s;
}

int cmd_solve(const Common& c, const std::string& scenario, bool backward) {
    SolveSetup s = setup(c, scenario);
    const auto& cfg = s.config;
    const SolveReport r = backward
                              ? solve_backward(s.field, s.driver, s.exponents, cfg.T, s.x0, cfg.t0, cfg.solve)
                              : solve_forward(s.field, s.driver, s.exponents, cfg.t0, s.x0, cfg.T, cfg.solve);
    std::printf("%s solve on [%s, %s]: %zu intervals, max Picard iterations %d, max residual %s\n",
                backward ? "backward" : "forward", format_number(cfg.t0).c_str(),
                format_number(cfg.T).c_str(), r.windows.size(), r.max_iterations(),
                format_number(r.max_residual()).c_str());
    print_certificates(r.certificates);
    if (!c.out.empty()) {
        fs::create_directories(c.out);
        write_path_csv(fs::path(c.out) / "solution.csv", r.solution);
        write_file(fs::path(c.out) / "report.json", to_json(r));
    }
    return r.certificates_ok() ? kOk : kFailed;
}

int cmd_flow_check(const Common& c, const std::string& scenario, const std::string& times,
                   std::size_t probes, double tol) {
    SolveSetup s = setup(c, scenario);
    const auto& cfg = s.config;
    std::vector<std::array<double, 3>> triples;
    if (!times.empty()) {
        const auto v = parse_reals(times, 3, "--times");
        triples.push_back({v[0], v[1], v[2]});
    } else {
        const double a = cfg.t0, L = cfg.T - cfg.t0;
        triples = {{a, a + 0.5 * L, cfg.T}, {cfg.T, a + 0.25 * L, a + 0.5 * L}};
    }
    std::vector<Vector> xs{s.x0};
    for (std::size_t k = 1; k < probes; ++k) {
        Vector x = s.x0;
        x.array() += 0.25 * static_cast<double>(k) * (k % 2 ? 1.0 : -1.0);
        xs.push_back(x);
    }
    SolveOptions opts = cfg.solve;
    opts.certify = false;
    std::string text = "[\n";
    bool ok = true;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        const FlowCheckReport r = flow_axiom_check(s.field, s.driver, s.exponents, t[0], t[1], t[2], xs, tol, opts);
        ok = ok && r.ok;
        std::string one = to_json(r);
        one.pop_back();
        text += one + (i + 1 < triples.size() ? ",\n" : "\n");
    }
    text += "]\n";
    std::fputs(text.c_str(), stdout);
    if (!c.out.empty()) write_file(fs::path(c.out) / "flow.json", text);
    return ok ? kOk : kFailed;
}

int cmd_fbm(const Common& c, double hurst, std::size_t samples, double horizon) {
    FbmSpec spec{hurst, horizon, samples, c.seed.value_or(0)};
    try {
        validate(spec);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    const SampledPath w = fbm_sample(spec);
    if (c.out.empty()) {
        write_path_csv(std::cout, w);
    } else {
        fs::create_directories(c.out);
        write_path_csv(fs::path(c.out) / "fbm.csv", w);
        write_file(fs::path(c.out) / "fbm.json", to_json(spec));
    }
    return kOk;
}

int report_run(const std::string& label, const RunResult& r, const fs::path& out) {
    for (const auto& s : r.seeds) {
        std::printf("%s seed %llu: %s", label.c_str(), static_cast<unsigned long long>(s.seed),
                    s.ok() ? "ok" : "FAIL");
        if (!s.error.empty()) std::printf(" (%s)", s.error.c_str());
        for (const auto& c : s.certificates) {
            if (!c.ok) std::printf(" [%s lhs=%s rhs=%s]", c.name.c_str(), format_number(c.lhs).c_str(),
                                   format_number(c.rhs).c_str());
        }
        std::printf("\n");
    }
    if (!out.empty()) write_artifacts(r, out);
    return r.ok() ? kOk : kFailed;
}

int cmd_run(const Common& c, const std::string& scenario) {
    ExperimentConfig cfg = load(c, scenario);
    if (c.seed) cfg.seeds = {*c.seed};
    const fs::path out = c.out.empty() ? fs::path(cfg.output) : fs::path(c.out);
    const RunResult r = run_experiment(cfg);
    std::fputs(summary_csv(r).c_str(), stdout);
    if (!out.empty()) write_artifacts(r, out);
    return r.ok() ? kOk : kFailed;
}

int cmd_verify(const Common& c, const std::string& scenario) {
    std::vector<ExperimentConfig> configs;
    if (!c.config.empty() || !scenario.empty()) {
        configs.push_back(load(c, scenario));
    } else {
        for (const auto& name : bundled_scenario_names()) configs.push_back(bundled_scenario(name));
    }
    int status = kOk;
    for (auto& cfg : configs) {
        if (c.seed) cfg.seeds = {*c.seed};
        const RunResult r = run_experiment(cfg);
        const std::string label = cfg.scenario.empty() ? "config" : cfg.scenario;
        const fs::path out = c.out.empty() ? fs::path() : fs::path(c.out) / label;
        if (report_run(label, r, out) != kOk) status = kFailed;
    }
    std::printf("verify: %s\n", status == kOk ? "all certificates ok" : "certificate failures");
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Young differential equations: certified integration, solving and flow checks"};
    app.require_subcommand(1);

    Common pvar_o, integrate_o, greedy_o, solve_o, flow_o, fbm_o, verify_o, run_o;
    double lambda = 1.0, mu = 0.5, hurst = 0.75, horizon = 1.0, tol = 1e-5;
    std::size_t samples = 1025, probes = 3;
    std::string scenario, times;
    bool backward = false;

    auto* pvar = app.add_subcommand("pvar", "p-variation of a CSV path");
    add_common(pvar, pvar_o);
    auto* integrate = app.add_subcommand("integrate", "Young integral of integrand and driver CSVs");
    add_common(integrate, integrate_o);
    auto* greedy = app.add_subcommand("greedy", "Greedy time sequence of a driver CSV");
    add_common(greedy, greedy_o);
    greedy->add_option("--lambda", lambda, "Time exponent")->capture_default_str();
    greedy->add_option("--mu", mu, "Budget")->capture_default_str();
    auto* solve = app.add_subcommand("solve", "Forward or backward solve of a scenario");
    add_common(solve, solve_o);
    solve->add_option("--scenario", scenario, "Bundled scenario name");
    solve->add_flag("--backward", backward, "Treat x0 as the terminal value at T");
    auto* flow = app.add_subcommand("flow-check", "Two-parameter flow axiom residuals");
    add_common(flow, flow_o);
    flow->add_option("--scenario", scenario, "Bundled scenario name");
    flow->add_option("--times", times, "Time triple s,u,t");
    flow->add_option("--probes", probes, "Number of probe states")->capture_default_str();
    flow->add_option("--tol", tol, "Residual tolerance")->capture_default_str();
    auto* fbm = app.add_subcommand("fbm", "Fractional Brownian motion driver");
    add_common(fbm, fbm_o);
    fbm->add_option("--hurst", hurst, "Hurst parameter in [0.5, 1)")->capture_default_str();
    fbm->add_option("--samples", samples, "Grid points including t = 0")->capture_default_str();
    fbm->add_option("--horizon", horizon, "Final time")->capture_default_str();
    auto* verify = app.add_subcommand("verify", "Full certificate suite on a config or the bundled scenarios");
    add_common(verify, verify_o);
    verify->add_option("--scenario", scenario, "Bundled scenario name");
    auto* run = app.add_subcommand("run", "Batch run of a config over its seeds");
    add_common(run, run_o);
    run->add_option("--scenario", scenario, "Bundled scenario name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (pvar->parsed()) return cmd_pvar(pvar_o);
        if (integrate->parsed()) return cmd_integrate(integrate_o);
        if (greedy->parsed()) return cmd_greedy(greedy_o, lambda, mu);
        if (solve->parsed()) return cmd_solve(solve_o, scenario, backward);
        if (flow->parsed()) return cmd_flow_check(flow_o, scenario, times, probes, tol);
        if (fbm->parsed()) return cmd_fbm(fbm_o, hurst, samples, horizon);
        if (verify->parsed()) return cmd_verify(verify_o, scenario);
        if (run->parsed()) return cmd_run(run_o, scenario);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailed;
    }
    return kUsage;
}
