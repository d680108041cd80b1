#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rabinovich/cli/commands.hpp"
#include "rabinovich/cli/verify.hpp"

using namespace rabinovich;
using namespace rabinovich::cli;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kVerify = 3 };

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << body;
}

std::pair<int, int> parse_pair(const std::string& s) {
    int i = 0, j = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d,%d%c", &i, &j, &tail) != 2 || i < 1 || i > 3 || j < 1 || j > 3)
        throw ConfigError("--pair: expected i,j with i, j in 1..3, got '" + s + "'");
    return {i, j};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rabinovich-type systems: simulation, analysis and verification"};
    app.require_subcommand(1);

    std::string config_path, target, suite, json_path, traj_path, pair = "1,2";
    std::uint64_t seed = 42;
    bool svg = false;

    auto* sim = app.add_subcommand("simulate", "integrate a scenario and write its trajectory");
    sim->add_option("--config", config_path, "scenario file")->required();

    auto* ana = app.add_subcommand("analyze", "equilibria, spectra and characteristic functions");
    ana->add_option("--config", config_path, "scenario file")->required();
    ana->add_option("--target", target, "equilibria | charpoly | matignon | roots")
        ->required()
        ->check(CLI::IsMember({"equilibria", "charpoly", "matignon", "roots"}));

    auto* ver = app.add_subcommand("verify", "run invariant suites");
    std::vector<std::string> suites{"all"};
    for (const auto& s : suite_names()) suites.push_back(s);
    ver->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suites));
    ver->add_option("--seed", seed, "randomization seed");
    ver->add_option("--json", json_path, "also write the report as JSON");

    auto* plt = app.add_subcommand("plot", "phase-plane data from a trajectory file");
    plt->add_option("trajectory", traj_path, "CSV or JSON trajectory")->required();
    plt->add_option("--pair", pair, "state components i,j");
    plt->add_flag("--svg", svg, "emit SVG instead of two-column CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*sim) {
            const ScenarioConfig cfg = load_config(config_path);
            const Trajectory tr = run_simulate(cfg);
            std::cerr << "wrote " << tr.size() << " rows to " << *cfg.output_path << "\n";
        } else if (*ana) {
            const ScenarioConfig cfg = load_config(config_path);
            const AnalyzeReport rep = run_analyze(cfg, target);
            std::cout << rep.text;
            if (cfg.output_path) write_file(*cfg.output_path, rep.json);
        } else if (*ver) {
            const VerificationReport rep = run_verify(suite, seed);
            std::cout << rep.text();
            if (!json_path.empty()) write_file(json_path, rep.json());
            return rep.ok() ? kOk : kVerify;
        } else if (*plt) {
            const auto [i, j] = parse_pair(pair);
            const TrajectoryTable t = read_trajectory(traj_path);
            std::cout << (svg ? plot_svg(t, i, j) : plot_csv(t, i, j));
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}
