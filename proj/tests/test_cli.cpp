#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(YOUNGFLOW_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof(buf), pipe)) r.out += buf;
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("youngflow_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name, std::ios::binary) << text;
        return dir / name;
    }
};

std::string linear_csv(int n) {
    std::string s = "t,x1\n";
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        s += std::to_string(t) + "," + std::to_string(t) + "\n";
    }
    return s;
}

}  // namespace

TEST_CASE("pvar of a linear path") {
    Scratch s;
    const auto csv = s.write("linear.csv", linear_csv(11));
    const auto r = run("pvar --input " + csv.string() + " --p 1 --window 0,1");
    CHECK(r.status == 0);
    CHECK(r.out == "1\n");
}

TEST_CASE("greedy on a linear driver") {
    Scratch s;
    const auto csv = s.write("linear.csv", linear_csv(101));
    const auto r = run("greedy --input " + csv.string() + " --p 1.5 --lambda 1 --mu 0.5 --out " + (s.dir / "g").string());
    CHECK(r.status == 0);
    CHECK(r.out.find("\"times\": [\n    0.0,\n    0.25,\n    0.5,\n    0.75,\n    1.0\n  ]") != std::string::npos);
    CHECK(fs::exists(s.dir / "g" / "count_bound.json"));
}

TEST_CASE("integrate reports a Young-Loeve certificate") {
    Scratch s;
    const auto x = s.write("x.csv", linear_csv(101));
    const auto r = run("integrate --input " + x.string() + "," + x.string() + " --p 1.2 --q 1.2");
    CHECK(r.status == 0);
    // Left Riemann sum of x dx on 101 points: 0.5 - h/2.
    CHECK(r.out.find("\"value\": [0.495") != std::string::npos);
    CHECK(r.out.find("\"defect\"") != std::string::npos);
}

TEST_CASE("usage and config errors exit with status 2") {
    Scratch s;
    CHECK(run("").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("pvar --input nowhere.csv").status == 2);
    CHECK(run("pvar --p 1 --window 1").status == 2);
    const auto bad = s.write("bad.json", "{\n  \"scenario\": \"zero\",\n  \"seeds\": [1,\n}");
    CHECK(run("run --config " + bad.string()).status == 2);
    const auto unknown = s.write("unknown.json", "{\"scenario\": \"zero\", \"colour\": 1}");
    CHECK(run("verify --config " + unknown.string()).status == 2);
    CHECK(run("solve --scenario nope").status == 2);
    CHECK(run("fbm --hurst 0.2").status == 2);
    CHECK(run("--help").status == 0);
}

TEST_CASE("fbm output is reproducible") {
    Scratch s;
    CHECK(run("fbm --hurst 0.7 --samples 65 --seed 9 --out " + (s.dir / "a").string()).status == 0);
    CHECK(run("fbm --hurst 0.7 --samples 65 --seed 9 --out " + (s.dir / "b").string()).status == 0);
    CHECK(slurp(s.dir / "a" / "fbm.csv") == slurp(s.dir / "b" / "fbm.csv"));
    CHECK(slurp(s.dir / "a" / "fbm.json").find("\"hurst\": 0.7") != std::string::npos);
}

TEST_CASE("solve, flow-check, run and verify on the zero scenario") {
    Scratch s;
    CHECK(run("solve --scenario zero --seed 1 --out " + (s.dir / "solve").string()).status == 0);
    CHECK(fs::exists(s.dir / "solve" / "solution.csv"));
    CHECK(run("solve --scenario linear-sine --backward --window 0,1").status == 0);
    const auto flow = run("flow-check --scenario zero --times 0,0.5,1");
    CHECK(flow.status == 0);
    CHECK(flow.out.find("\"composition_residual\": 0.0") != std::string::npos);
    const auto cfg = s.write("zero.json", "{\"scenario\": \"zero\", \"seeds\": [2, 1]}");
    const auto r = run("run --config " + cfg.string() + " --out " + (s.dir / "run").string());
    CHECK(r.status == 0);
    CHECK(r.out.rfind("seed,greedy_interval_count", 0) == 0);
    CHECK(fs::exists(s.dir / "run" / "seed-2" / "report.json"));
    CHECK(run("verify --scenario zero --out " + (s.dir / "verify").string()).status == 0);
    CHECK(fs::exists(s.dir / "verify" / "zero" / "summary.csv"));
}
