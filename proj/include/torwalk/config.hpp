#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "torwalk/measure.hpp"
#include "torwalk/test_function.hpp"

namespace torwalk {

using Json = nlohmann::ordered_json;

// Measure definition: dimension, generators (name + tag or decimal
// expansion), atoms (integer matrix rows, translation coefficients), weights
// as exact rationals. det = 1 and weight sum are validated on load.
FiniteSupportMeasure measure_from_json(const Json& j);
Json measure_to_json(const FiniteSupportMeasure& mu);

// built-in presets: "golden", "linear-only", "rational-v"
Json preset_measure(const std::string& name);

// test-function spec: {"kind": "re_ec", "c": [1,0]}, {"kind":"fq",...}, ...
TestFunction test_function_from_json(const Json& j, const FiniteSupportMeasure& mu);

struct ExperimentConfig {
    std::string kind;
    Json params;          // kind-specific, defaults resolved
    Json measure_json;    // full resolved measure definition
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";
    Json resolved;        // the full config with defaults applied
    std::string source_path;
};

// Parses and validates a config file. Unknown keys are rejected; defaults
// are recorded explicitly in `resolved`.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(Json j, const std::string& source);

// Runs the experiment, writes CSV series and a JSON summary under out_dir.
// Returns the process exit status (0 unless a declared threshold failed).
int run_experiment(const ExperimentConfig& cfg);

}  // namespace torwalk
