#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace balayage {

/// Process exit codes of a scenario run.
enum ExitCode : int {
    kExitPass = 0,
    kExitVerificationFailed = 1,
    kExitConfigError = 2,
    kExitNumericFault = 3,
};

struct ScenarioOptions {
    /// Overrides the config's "seed" when set.
    std::optional<std::uint64_t> seed;
    /// Adds "wall_time_s" to the report (which then stops being reproducible).
    bool timing = false;
    /// Directory against which relative "mask_file" paths are resolved.
    std::string base_dir;
};

struct ScenarioResult {
    int exit_code = kExitConfigError;
    /// Report JSON (always produced, errors included).
    std::string report;
    /// Residual table: name,value,tolerance,pass
    std::string csv;
    std::string message;
};

/// Runs a scenario from its JSON config text. Never throws: every failure is
/// mapped to an exit code and described in the report.
ScenarioResult run_scenario(const std::string& config_text, const ScenarioOptions& options = {});

/// Kinds accepted by run_scenario, in a stable order.
const std::vector<std::string>& scenario_kinds();

/// Deterministic fixture files (file name, contents) for a fixture kind.
/// Throws ConfigError on an unknown kind.
std::vector<std::pair<std::string, std::string>> make_fixture(const std::string& kind, std::uint64_t seed);

const std::vector<std::string>& fixture_kinds();

} // namespace balayage
