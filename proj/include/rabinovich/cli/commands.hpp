#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rabinovich/cli/config.hpp"
#include "rabinovich/core_dynamics.hpp"

namespace rabinovich::cli {

/// Malformed trajectory file; `line` is 1-based (0 when not line-specific).
class ParseError : public DomainError {
public:
    ParseError(const std::string& what, int line) : DomainError(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Integrates the configured scenario. Monitors are those declared in the
/// config, in declared order.
Trajectory simulate(const ScenarioConfig& cfg);

/// `simulate`: integrates and writes the trajectory to output.path.
Trajectory run_simulate(const ScenarioConfig& cfg);

/// 17-significant-digit decimal.
std::string format_real(double x);

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& monitors);
void write_trajectory_json(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& monitors,
                           const ScenarioConfig& cfg);

/// Column-major view of a trajectory file.
struct TrajectoryTable {
    std::vector<std::string> columns;           // t, x1, x2, x3, monitors...
    std::vector<std::vector<double>> data;      // data[c][row]
    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
};

/// Reads a CSV or JSON trajectory file. Throws ParseError.
TrajectoryTable read_trajectory(const std::string& path);
TrajectoryTable parse_trajectory_csv(const std::string& text);

/// Phase-plane data for columns x_i, x_j (1-based).
std::string plot_svg(const TrajectoryTable& t, int i, int j);
std::string plot_csv(const TrajectoryTable& t, int i, int j);

struct AnalyzeReport {
    std::string text;
    std::string json;
};

/// `analyze`: equilibrium families, Jacobians, spectra, verdicts and
/// characteristic-function data for the configured system.
AnalyzeReport run_analyze(const ScenarioConfig& cfg, const std::string& target);

}  // namespace rabinovich::cli
