#pragma once

// Scenario configuration: flat `key = value` text with `#` comments and
// dotted keys for the kernel and the blend weights.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rabinovich/delay.hpp"
#include "rabinovich/stability.hpp"

namespace rabinovich::cli {

/// Invalid configuration. The message names the offending field.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

struct ScenarioConfig {
    std::string system;
    std::optional<double> m;
    std::optional<StateVec> x0;
    std::optional<double> alpha;
    std::optional<double> tau;  // Dirac lag of the fractional delay system
    std::optional<Kernel> kernel;
    std::optional<BlendWeights> weights;
    RevisedMode mode = RevisedMode::Constructed;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::vector<std::string> monitors;
    std::optional<std::string> output_path;
    std::string output_format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<Region> region;
    std::optional<int> grid;

    /// Keys and raw values in file order, echoed into JSON output.
    std::vector<std::pair<std::string, std::string>> entries;
};

const std::vector<std::string>& system_ids();
bool is_fractional_system(std::string_view system);
bool is_delay_system(std::string_view system);

/// Parses and validates the per-system field rules. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text);
/// Reads `path` and parses it. Throws ConfigError if the file is unreadable.
ScenarioConfig load_config(const std::string& path);

/// Checks the fields `simulate` needs (x0, dt, t_end, output.path).
void require_for_simulate(const ScenarioConfig& cfg);
/// Checks the fields an `analyze` target needs.
void require_for_analyze(const ScenarioConfig& cfg, std::string_view target);

/// Number of steps t_end/dt; throws ConfigError unless t_end is a multiple of dt.
long step_count(const ScenarioConfig& cfg);

}  // namespace rabinovich::cli
