#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rabinovich/cli/commands.hpp"
#include "rabinovich/cli/verify.hpp"

using namespace rabinovich;
using namespace rabinovich::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "rabinovich_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string rejection(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kWeights =
    "eps.0 = 0.4\neps.1 = 0.3\neps.2 = 0.2\neps.3 = 0.1\n"
    "delta.0 = 0.25\ndelta.1 = 0.25\ndelta.2 = 0.25\ndelta.3 = 0.25\n";

}  // namespace

TEST_CASE("config: rejections name the field") {
    CHECK(rejection("x0 = (1,2,3)\n").starts_with("system"));
    CHECK(rejection("system = lorenz\n").starts_with("system"));
    CHECK(rejection("system = fractional\n").starts_with("alpha"));
    CHECK(rejection("system = fractional\nalpha = 1.5\n").starts_with("alpha"));
    CHECK(rejection("system = fractional\nalpha = 0\n").starts_with("alpha"));
    CHECK(rejection("system = classical\nalpha = 0.5\n").starts_with("alpha"));
    CHECK(rejection("system = classical\ndt = fast\n").starts_with("dt"));
    CHECK(rejection("system = classical\nx0 = (1, 2)\n").starts_with("x0"));
    CHECK(rejection("system = classical\nspeed = 3\n").starts_with("speed"));
    CHECK(rejection("system = classical\nm = 1\nm = 2\n").starts_with("m"));
    CHECK(rejection("system = classical\nmonitors = h1, h9\n").starts_with("monitors"));
    CHECK(rejection("system = classical\nmonitors = h1, h1\n").starts_with("monitors"));
    CHECK(rejection("system = delay\n" + std::string(kWeights)).starts_with("kernel.type"));
    CHECK(rejection("system = delay\nkernel.type = exponential\n" + std::string(kWeights)).starts_with("kernel.alpha"));
    CHECK(rejection("system = delay\nkernel.type = dirac\nkernel.tau = 1\n").starts_with("eps.0"));
    CHECK(rejection("system = delay\nkernel.type = dirac\nkernel.tau = 1\nkernel.alpha = 2\n" +
                    std::string(kWeights))
              .starts_with("kernel.alpha"));
    CHECK(rejection("system = delay\nkernel.type = dirac\nkernel.tau = 1\neps.0 = 0.5\neps.1 = 0.3\neps.2 = 0.2\n"
                    "eps.3 = 0.1\ndelta.0 = 1\ndelta.1 = 0\ndelta.2 = 0\ndelta.3 = 0\n")
              .starts_with("eps"));
    CHECK(rejection("system = classical\nkernel.type = dirac\n").starts_with("kernel"));
    CHECK(rejection("system = fractional-delay\nalpha = 0.8\n" + std::string(kWeights)).starts_with("tau"));
    CHECK(rejection("system = classical\nmode = literal\n").starts_with("mode"));
    CHECK(rejection("system = classical\noutput.format = xml\n").starts_with("output.format"));

    const ScenarioConfig cfg = parse_config("system = classical\n");
    CHECK_THROWS_AS(require_for_simulate(cfg), ConfigError);
    CHECK_THROWS_AS(require_for_analyze(cfg, "equilibria"), ConfigError);
    CHECK_THROWS_AS(require_for_analyze(parse_config("system = classical\nm = 1\n"), "matignon"), ConfigError);
    CHECK_THROWS_AS(require_for_analyze(parse_config("system = classical\nm = 1\n"), "roots"), ConfigError);
    CHECK_THROWS_AS(load_config(scratch("missing.conf").string()), ConfigError);
    CHECK_THROWS_AS(step_count(parse_config("system = classical\ndt = 0.3\nt_end = 1\n")), ConfigError);
}

TEST_CASE("config: accepted scenarios") {
    const ScenarioConfig c = parse_config(
        "# delay run\nsystem = delay\nx0 = (0.5, 0.4, 1)\nkernel.type = uniform\nkernel.a = 0\nkernel.tau = 1\n" +
        std::string(kWeights) + "dt = 0.01\nt_end = 1\nmonitors = c1, h1\noutput.path = out.csv\n");
    CHECK(c.kernel.has_value());
    CHECK(c.weights->a5() == doctest::Approx(0.3));
    CHECK(c.monitors == std::vector<std::string>{"c1", "h1"});
    CHECK(step_count(c) == 100);
}

TEST_CASE("simulate: classical CSV has 10001 rows and a constant h1 column") {
    const fs::path out = scratch("classical.csv");
    ScenarioConfig cfg = parse_config("system = classical\nx0 = (1,2,3)\ndt = 1e-3\nt_end = 10\nmonitors = h1, c1, h3\n"
                                      "output.path = " + out.string() + "\n");
    run_simulate(cfg);
    const std::string text = slurp(out);
    CHECK(text.substr(0, text.find('\n')) == "t,x1,x2,x3,h1,c1,h3");
    const TrajectoryTable t = read_trajectory(out.string());
    REQUIRE(t.rows() == 10001);
    const auto& h1 = t.data[4];
    double drift = 0;
    for (double v : h1) drift = std::max(drift, std::abs(v - h1.front()));
    CHECK(drift < 1e-7);
    CHECK(t.data[0].back() == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("simulate: CSV round trip is bit-exact") {
    const fs::path out = scratch("roundtrip.csv");
    ScenarioConfig cfg = parse_config("system = metriplectic-second\nx0 = (0.3,0.2,0.1)\ndt = 1e-2\nt_end = 3\n"
                                      "monitors = c1\noutput.path = " + out.string() + "\n");
    const Trajectory tr = run_simulate(cfg);
    const TrajectoryTable t = read_trajectory(out.string());
    REQUIRE(t.rows() == tr.size());
    bool exact = true;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        exact = exact && t.data[0][i] == tr.time(i);
        for (std::size_t c = 0; c < 3; ++c) exact = exact && t.data[c + 1][i] == tr.states()[i][c];
        exact = exact && t.data[4][i] == tr.monitor("c1")[i];
    }
    CHECK(exact);
    CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("simulate: JSON carries the config echo and column data") {
    const fs::path out = scratch("delay.json");
    ScenarioConfig cfg = parse_config("system = delay\nx0 = (0.5,0.4,1)\nkernel.type = exponential\nkernel.alpha = 2\n" +
                                      std::string(kWeights) + "dt = 0.05\nt_end = 1\noutput.format = json\n"
                                      "output.path = " + out.string() + "\n");
    run_simulate(cfg);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["meta"]["system"] == "delay");
    CHECK(j["meta"]["kernel.alpha"] == 2.0);
    CHECK(j["data"]["x1"].size() == 21);
    CHECK(read_trajectory(out.string()).rows() == 21);
}

TEST_CASE("simulate: fractional alpha = 1 file matches the RK4 file") {
    const fs::path a = scratch("fig2.csv"), b = scratch("fig2_rk4.csv");
    run_simulate(parse_config("system = fractional\nalpha = 1\nx0 = (0.001,0.001,6)\ndt = 1e-3\nt_end = 10\n"
                              "output.path = " + a.string() + "\n"));
    run_simulate(parse_config("system = classical\nx0 = (0.001,0.001,6)\ndt = 1e-3\nt_end = 10\n"
                              "output.path = " + b.string() + "\n"));
    const TrajectoryTable ta = read_trajectory(a.string()), tb = read_trajectory(b.string());
    REQUIRE(ta.rows() == tb.rows());
    double gap = 0;
    for (std::size_t c = 1; c <= 3; ++c)
        for (std::size_t i = 0; i < ta.rows(); ++i) gap = std::max(gap, std::abs(ta.data[c][i] - tb.data[c][i]));
    CHECK(gap < 1e-3);
}

TEST_CASE("simulate: diverging run reports a numerical error") {
    ScenarioConfig cfg = parse_config("system = classical\nx0 = (1e100, 1e100, 1e100)\ndt = 1\nt_end = 100\n"
                                      "output.path = " + scratch("blowup.csv").string() + "\n");
    CHECK_THROWS_AS(run_simulate(cfg), NumericalError);
}

TEST_CASE("analyze: classical equilibria verdicts") {
    const AnalyzeReport r = run_analyze(parse_config("system = classical\nm = 1\n"), "equilibria");
    const auto j = nlohmann::json::parse(r.json);
    REQUIRE(j["families"].size() == 3);
    CHECK(j["families"][0]["verdict"]["classification"] == "spectrally-stable-marginal");
    CHECK(j["families"][1]["verdict"]["classification"] == "unstable");
    CHECK(j["families"][2]["verdict"]["classification"] == "spectrally-stable-marginal");
    CHECK(r.text.find("E2") != std::string::npos);
}

TEST_CASE("analyze: literal10 characteristic polynomial at E1") {
    const double m = 1.5;
    const AnalyzeReport r = run_analyze(parse_config("system = literal10\nm = 1.5\n"), "charpoly");
    const auto j = nlohmann::json::parse(r.json);
    const auto& c = j["families"][0]["charpoly"];
    // lambda (lambda^2 + m^2)
    CHECK(c[0].get<double>() == 0.0);
    CHECK(c[1].get<double>() == doctest::Approx(m * m));
    CHECK(c[2].get<double>() == 0.0);
    CHECK(c[3].get<double>() == 1.0);
}

TEST_CASE("analyze: fractional sector test at E3 is marginal with a zero eigenvalue") {
    const AnalyzeReport r = run_analyze(parse_config("system = fractional\nalpha = 0.8\nm = 1\n"), "matignon");
    const auto v = nlohmann::json::parse(r.json)["families"][2]["verdict"];
    CHECK(v["classification"] == "spectrally-stable-marginal");
    CHECK(v["zero_eigenvalue"] == true);
}

TEST_CASE("analyze: literal38 reports the non-stationary family") {
    const auto j = nlohmann::json::parse(run_analyze(parse_config("system = literal38\nm = 2\n"), "equilibria").json);
    CHECK(j["families"][0]["stationary"] == false);
    CHECK(j["families"][1]["stationary"] == true);
}

TEST_CASE("plot: SVG polyline, degenerate marker and malformed input") {
    const fs::path out = scratch("plot.csv");
    run_simulate(parse_config("system = classical\nx0 = (0.001,0.001,6)\ndt = 1e-2\nt_end = 5\n"
                              "output.path = " + out.string() + "\n"));
    const TrajectoryTable t = read_trajectory(out.string());
    const std::string svg = plot_svg(t, 2, 3);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    const std::string two = plot_csv(t, 2, 3);
    CHECK(two.substr(0, two.find('\n')) == "x2,x3");
    CHECK(std::count(two.begin(), two.end(), '\n') == 502);

    const TrajectoryTable still = parse_trajectory_csv("t,x1,x2,x3\n0,1,0,0\n1,1,0,0\n");
    const std::string dot = plot_svg(still, 1, 2);
    CHECK(dot.find("<circle") != std::string::npos);
    CHECK(dot.find("<polyline") == std::string::npos);

    CHECK_THROWS_AS(read_trajectory(scratch("absent.csv").string()), ParseError);
    try {
        parse_trajectory_csv("t,x1,x2,x3\n0,1,2,3\n0.1,1,oops,3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_trajectory_csv("t,x1,x2\n0,1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_trajectory_csv("t,x1,x2,x3\n0,1,2\n"), ParseError);
}

TEST_CASE("verify: deterministic, and discrepancies do not fail") {
    const VerificationReport a = run_verify("metriplectic", 7), b = run_verify("metriplectic", 7);
    CHECK(a.text() == b.text());
    CHECK(a.json() == b.json());
    CHECK(a.ok());
    CHECK(a.count(CheckStatus::DiscrepancyDocumented) >= 3);
    CHECK(a.count(CheckStatus::Fail) == 0);

    const VerificationReport p = run_verify("poisson", 42);
    CHECK(p.ok());
    for (const auto& c : p.checks)
        if (c.id == "poisson.tri-hamiltonian" || c.id == "poisson.jacobi" || c.id == "poisson.casimir")
            CHECK(c.status == CheckStatus::Pass);

    CHECK_THROWS_AS(run_verify("everything", 1), DomainError);
}
