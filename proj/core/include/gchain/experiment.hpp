#pragma once

#include "gchain/kernel.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gchain {

/// Validated experiment configuration. `raw` is the resolved config as it
/// will be echoed into the report payload (worker count excluded: it must
/// not influence results).
struct ExperimentConfig {
    nlohmann::json raw;
    std::string    kind;
    std::string    name;
    std::uint64_t  root_seed = 0;
    unsigned       workers   = 0; // 0: hardware concurrency
};

/// Parse and validate; error messages name the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);

struct ExperimentResult {
    nlohmann::json payload; // deterministic for fixed (config, rootSeed)
    nlohmann::json meta;    // wall time, worker count, timestamp
    std::vector<std::pair<std::string, std::string>> csv_files; // name -> content
    bool inconclusive = false;
    bool failed       = false; // an oracle/self-consistency check failed
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Resolve a past specification ({"all": label} or {"suffix": [...],
/// "tail": [...]}) against an alphabet.
Past past_from_json(const nlohmann::json& j, const Alphabet& alphabet,
                    const char* field_name);

// ---------------------------------------------------------------------------
// Presets: named experiment bundles reproducing the classical dichotomies at
// desk scale.
// ---------------------------------------------------------------------------

struct PresetInfo {
    std::string name;
    std::string anchor; // which classical result the preset exercises
    std::string description;
};

const std::vector<PresetInfo>& preset_catalog();

/// Configs of one preset (throws on unknown name). Sub-configs derive their
/// seeds from `root_seed` deterministically.
std::vector<nlohmann::json> preset_configs(const std::string& name,
                                           std::uint64_t root_seed);

/// Run every config of a preset and assemble the combined report (sub-reports
/// plus preset-level summary flags).
ExperimentResult run_preset(const std::string& name, std::uint64_t root_seed,
                            unsigned workers);

} // namespace gchain
