#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "youngflow/errors.hpp"
#include "youngflow/experiment.hpp"
#include "youngflow/serialization.hpp"

using namespace youngflow;

namespace {

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line;
    }
    return 0;
}

}  // namespace

TEST_CASE("bundled scenarios parse and have feasible exponents") {
    for (const auto& name : bundled_scenario_names()) {
        const auto c = bundled_scenario(name);
        CHECK(c.scenario == name);
        CHECK(c.x0.size() == c.field.dim);
        CHECK_NOTHROW(make_exponents(c.exponents, c.field, c.driver));
    }
    CHECK_THROWS_AS(bundled_scenario("nope"), ParameterError);
}

TEST_CASE("config overrides a bundled scenario") {
    const auto c = parse_config(R"({"scenario": "linear-sine", "seeds": [4, 2], "solve": {"picard_tol": 1e-12}})");
    CHECK(c.field.name == "linear");
    CHECK(c.seeds == std::vector<std::uint64_t>{4, 2});
    CHECK(c.solve.picard_tol == 1e-12);
    CHECK(c.T == 2.0);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(error_line("{\n  \"scenario\": \"zero\",\n  \"seeds\": [1,\n}") == 4);
    CHECK(error_line("{\n  \"scenario\": \"zero\",\n  \"sedes\": [1]\n}") == 3);
    CHECK(error_line("{\n  \"scenario\": \"zero\",\n  \"solve\": {\n    \"T\": -3\n  }\n}") == 3);
    CHECK(error_line("{\"scenario\": \"zero\",\n \"field\": {\"name\": \"cubic\"}}") == 2);
    CHECK(error_line("{\"scenario\": \"zero\",\n\n \"exponents\": {\"p\": 2.5}}") == 3);
    CHECK(error_line("{\"scenario\": \"zero\",\n \"x0\": [1, 2]}") == 2);
    CHECK(error_line("{\"scenario\": \"mystery\"}") == 1);
    try {
        parse_config("{\"scenario\": \"zero\",\n \"driver\": {\"kind\": \"fbm\", \"params\": {\"hurst\": 0.3}}}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("line 2: ", 0) == 0);
    }
}

TEST_CASE("zero scenario has zero residuals and passing certificates") {
    const auto c = bundled_scenario("zero");
    const auto r = run_experiment(c, 1);
    REQUIRE(r.seeds.size() == c.seeds.size());
    for (const auto& s : r.seeds) {
        CHECK(s.error.empty());
        CHECK(s.max_fixed_point_residual == 0.0);
        CHECK(s.flow_composition_residual == 0.0);
        CHECK(s.backward_error == 0.0);
        CHECK(s.gronwall_ok);
        CHECK(s.growth_ok);
        for (const auto& cert : s.certificates) CHECK_MESSAGE(cert.ok, cert.name);
    }
    CHECK(r.ok());
}

TEST_CASE("summary is sorted, deterministic and independent of the thread count") {
    auto c = bundled_scenario("linear-fbm");
    c.seeds = {7, 3, 5};
    const auto a = run_experiment(c, 1);
    const auto b = run_experiment(c, 3);
    const std::string csv = summary_csv(a);
    CHECK(csv == summary_csv(b));
    std::istringstream lines(csv);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header ==
          "seed,greedy_interval_count,count_bound,max_picard_iters,max_fixed_point_residual,"
          "gronwall_ok,growth_ok,flow_composition_residual");
    CHECK(first.rfind("3,", 0) == 0);
    CHECK(a.ok());
}

TEST_CASE("artifacts are written per seed") {
    auto c = bundled_scenario("zero");
    c.seeds = {1};
    const auto r = run_experiment(c);
    const auto dir = std::filesystem::temp_directory_path() / "youngflow_test_artifacts";
    std::filesystem::remove_all(dir);
    write_artifacts(r, dir);
    CHECK(std::filesystem::exists(dir / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "seed-1" / "solution.csv"));
    CHECK(std::filesystem::exists(dir / "seed-1" / "report.json"));
    CHECK(std::filesystem::exists(dir / "seed-1" / "certificates.json"));
    CHECK(std::filesystem::exists(dir / "seed-1" / "flow.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("solver failures are recorded, not thrown") {
    auto c = bundled_scenario("linear-sine");
    c.seeds = {0};
    c.solve.picard_max_iters = 1;
    c.solve.max_depth = 0;
    const auto r = run_experiment(c);
    REQUIRE(r.seeds.size() == 1);
    CHECK_FALSE(r.seeds[0].error.empty());
    CHECK_FALSE(r.ok());
    CHECK(summary_csv(r).find("0,0,0,0,0,false,false,0") != std::string::npos);
}

TEST_CASE("thread cap follows the environment") {
    setenv("YOUNGFLOW_THREADS", "3", 1);
    CHECK(thread_cap() == 3);
    setenv("YOUNGFLOW_THREADS", "zero", 1);
    CHECK(thread_cap() >= 1);
    unsetenv("YOUNGFLOW_THREADS");
}

TEST_CASE("JSON shapes") {
    GreedySequence g;
    g.lambda = 1.0;
    g.mu = 0.5;
    g.times = {0.0, 0.5};
    g.residuals = {0.0};
    const std::string j = to_json(g);
    CHECK(j.find("\"lambda\": 1.0") != std::string::npos);
    CHECK(j.find("\"times\"") != std::string::npos);
    Certificate cert = make_certificate("x", 1.0, std::numeric_limits<double>::infinity(), {0.0, 1.0});
    const std::string cj = to_json(cert);
    CHECK(cj.find("\"rhs\": \"inf\"") != std::string::npos);
    CHECK(cj.find("\"window\"") != std::string::npos);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}
