#pragma once

#include "fcs/simulator.hpp"

#include <cstdint>
#include <string>

namespace fcs {

/// Parsed run configuration. Every field defaults to the reference parameter
/// set, so an empty (or absent) config file reproduces the baseline runs.
struct RunConfig {
    RunParams params;
    std::string controller = "both";  // ft | fl | both
    std::string scenario = "steady";  // steady | ramp | step | fswstep | all
    bool use_bound = true;            // FL decoder speed-up toggle
    bool compare_no_bound = false;    // add an FL run without the bound
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

/// Apply one "section.key" = value pair. Throws on unknown keys or malformed
/// values. Recognized sections: system, controller, scenario, output.
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

/// Read one "section.key" back as a string. Throws on unknown keys.
std::string get_config_kv(const RunConfig& cfg, const std::string& key);

/// Parse a flat sectioned key=value file ('#' and ';' start comments).
RunConfig load_config(const std::string& path);

/// Parse config text (same format as load_config).
RunConfig parse_config(const std::string& text);

}  // namespace fcs
