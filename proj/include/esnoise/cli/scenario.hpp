#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "esnoise/cli/config.hpp"

namespace esnoise::cli {

// The six reproduction scenarios. Each maps to one figure family of the
// studied model: single-neuron statistics, single-neuron (alpha, x) sweep,
// uniform-reservoir runs, the gamma sweep, diagonal-blurred runs, and the
// blurring-coefficient comparison.
enum class ScenarioName {
    OneNeuron,
    OneNeuronAlphaSweep,
    EsnUniform,
    EsnGammaSweep,
    EsnDiagonal,
    EsnZetaCompare,
};

ScenarioName scenario_from_string(const std::string& name);
const char* to_string(ScenarioName name) noexcept;
std::vector<std::string> scenario_names();

struct ScenarioResult {
    std::vector<std::filesystem::path> artifacts;
};

// Fill in the scenario's preset parameters (only where the user has not
// overridden them) and return the fully resolved configuration.
RunConfig resolve_scenario(ScenarioName name, RunConfig config);

// Execute the resolved scenario: one CSV and one SVG per panel plus a
// manifest (key,value CSV) recording every resolved parameter, the seed and
// the code version. Identical (config, seed) produce bitwise-identical
// CSVs for any worker count. Returns the emitted paths.
ScenarioResult run_scenario(const RunConfig& resolved,
                            const std::filesystem::path& out_dir);

}  // namespace esnoise::cli
