#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "youngflow/certificate.hpp"
#include "youngflow/coefficients.hpp"
#include "youngflow/flow.hpp"
#include "youngflow/paths.hpp"
#include "youngflow/solver.hpp"

namespace youngflow {

// "linear" (a, b0, c, d0), "bounded_smooth" (kf, sigma), "time_varying" (amp, sigma) or
// "zero"; every field also takes alpha.
struct FieldSpec {
    std::string name = "zero";
    std::size_t dim = 1;
    std::map<std::string, double> params;
};

// kind "fbm" (param hurst) or an analytic_driver kind; driven by seed only for fbm.
struct DriverSpec {
    std::string kind = "linear";
    Interval horizon{0.0, 1.0};
    std::size_t samples = 1001;
    std::map<std::string, double> params;
};

// "auto": p = 1.1 for smooth drivers, p = 1/H + (2 - 1/H)/4 for Hurst-type drivers.
// alpha, beta, delta default to the field's declared constants.
struct ExponentSpec {
    std::optional<double> p;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> delta;
};

struct FlowSpec {
    std::vector<std::array<double, 3>> triples;  // empty: three defaults over [t0, T]
    std::size_t probes = 3;
    double tolerance = 1e-5;
};

struct ExperimentConfig {
    std::string scenario;
    FieldSpec field;
    DriverSpec driver;
    ExponentSpec exponents;
    SolveOptions solve;
    double t0 = 0.0;
    double T = 1.0;
    std::vector<double> x0{1.0};
    double x0_spread = 0.0;  // seed-dependent offset, uniform in [-spread, spread]^d
    FlowSpec flow;
    double backward_tolerance = 1e-6;
    double concatenation_tolerance = 2e-10;
    std::vector<std::uint64_t> seeds{0};
    std::string output;
};

// Parses a JSON config. A "scenario" naming a bundled scenario supplies defaults for
// every other key. Errors carry the line of the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& file);

std::vector<std::string> bundled_scenario_names();
ExperimentConfig bundled_scenario(const std::string& name);

CoefficientField make_field(const FieldSpec& spec);
SampledPath make_driver(const DriverSpec& spec, std::uint64_t seed);
ExponentSet make_exponents(const ExponentSpec& spec, const FieldSpec& field,
                           const DriverSpec& driver);

// x0 plus the seed-dependent offset used by run_seed.
Vector initial_value(const ExperimentConfig& config, std::uint64_t seed);

struct SeedResult {
    std::uint64_t seed = 0;
    std::string error;  // solver failure; empty when the run completed
    Vector x0;
    std::size_t greedy_interval_count = 0;
    double count_bound = 0.0;
    int max_picard_iters = 0;
    double max_fixed_point_residual = 0.0;
    bool gronwall_ok = false;
    bool growth_ok = false;
    double flow_composition_residual = 0.0;
    double flow_inversion_residual = 0.0;
    double flow_identity_residual = 0.0;
    double backward_error = 0.0;
    double concatenation_gap = 0.0;
    std::vector<Certificate> certificates;
    std::optional<SolveReport> report;
    SampledPath driver;
    std::vector<FlowCheckReport> flows;

    bool ok() const { return error.empty() && all_ok(certificates); }
};

struct RunResult {
    std::vector<SeedResult> seeds;  // sorted by seed

    bool ok() const;
};

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed);

// Seeds run in parallel on at most `threads` workers (0: thread_cap()).
RunResult run_experiment(const ExperimentConfig& config, std::size_t threads = 0);

// YOUNGFLOW_THREADS when set to a positive integer, else the hardware concurrency.
std::size_t thread_cap();

std::string summary_csv(const RunResult& result);

// dir/summary.csv plus dir/seed-<n>/{driver.csv, solution.csv, report.json, certificates.json,
// flow.json}.
void write_artifacts(const RunResult& result, const std::filesystem::path& dir);

}  // namespace youngflow
