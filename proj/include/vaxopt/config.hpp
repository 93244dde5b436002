#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vaxopt/analysis.hpp"

namespace vaxopt {

/// Settings for the sensitivity studies driven by the CLI.
struct AnalysisSettings {
    double activity_threshold = 0.05;
    /// theta1 values swept with theta2 fixed at its scenario value.
    std::vector<double> theta1_sweep = {0.75, 0.76, 0.77, 0.78, 0.80};
    /// theta2 values swept with theta1 fixed at its scenario value.
    std::vector<double> theta2_sweep = {0.67, 0.66, 0.65, 0.64};
    /// Extra diagnostic reduction reported next to the -20% grid row.
    double rate_probe_fraction = 0.19;
};

struct AppConfig {
    Scenario scenario;
    AnalysisSettings analysis;
};

/// Builds a scenario from a config document. Every field has a default; only
/// params.theta1 and params.theta2 are required. Unknown keys, type errors
/// and invariant violations (including theta2 >= theta1) raise ConfigError
/// naming the key or constraint.
AppConfig config_from_json(const nlohmann::json& doc);

/// Reads and parses a config file, then delegates to config_from_json.
AppConfig load_config(const std::filesystem::path& path);

/// Fully resolved settings as a config document. Feeding the result back
/// through config_from_json reproduces the same configuration exactly.
nlohmann::json resolved_config_json(const AppConfig& cfg);

}  // namespace vaxopt
