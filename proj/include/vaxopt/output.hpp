#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vaxopt/analysis.hpp"

namespace vaxopt {

/// Shortest text that round-trips a double exactly (17 significant digits).
std::string format_g17(double value);

/// FNV-1a 64-bit digest, rendered as "fnv1a64:<16 hex digits>".
std::string digest_bytes(std::string_view bytes);

/// Writes content to a temp file in the target directory, then renames it
/// into place so readers never observe partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// Fixed per-kind CSV layouts.
// states.csv:   t,S,V1,V2,E,I,R,N
// controls.csv: t,u1,u2
// adjoints.csv: t,lambda_S,lambda_V1,lambda_V2,lambda_E,lambda_I,lambda_R
void write_states_csv(const std::filesystem::path& path, const StateTrajectory& states);
void write_controls_csv(const std::filesystem::path& path, const ControlSchedule& controls);
void write_adjoints_csv(const std::filesystem::path& path, const AdjointTrajectory& adjoints);

/// Record of one CLI run: which scenario, the fully resolved settings, the
/// digest of the consumed config bytes, and every file the run emitted.
struct RunManifest {
    std::string command;
    std::string label;
    std::string timestamp;       ///< ISO-8601 UTC
    std::string config_digest;   ///< digest of the config file bytes as consumed
    nlohmann::json resolved_config;
    std::vector<std::string> outputs;  ///< emitted files, relative to the out dir
};

nlohmann::json manifest_json(const RunManifest& manifest);

/// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

/// Per-run summary document: objective, iterations, convergence flag,
/// procurement split, classification and crossover day.
nlohmann::json sweep_summary_json(const SweepResult& result,
                                  const ControlClassification& classification,
                                  const std::optional<ProcurementSplit>& split,
                                  double activity_threshold);

}  // namespace vaxopt
