#pragma once

#include <filesystem>
#include <string_view>

#include "invacc/actuator.hpp"
#include "invacc/clutch.hpp"
#include "invacc/material.hpp"
#include "invacc/simulator.hpp"
#include "invacc/sysid.hpp"

namespace invacc {

struct SimDefaults {
    double dt = 1.0e-3;     // [s]
    double noise_sd = 0.0;  // [N]
    std::uint64_t seed = 1;
};

// Everything a command needs about the device and the analysis, loaded from a
// flat key-value file. Every value carries an explicit unit suffix and every
// key except the optional slip-curve path is required; unknown keys are
// rejected so unit mistakes cannot hide behind defaults.
struct Config {
    ActuatorParams actuator;
    ClutchParams clutch;
    MaterialCurve material;
    double tendon_free_length = 0.0;  // [m], governs the stiffness estimate
    AnalysisOptions analysis;
    SimDefaults sim;

    void validate() const;
};

Config parse_config_text(std::string_view text, std::string_view origin);
Config load_config(const std::filesystem::path& path);

// Prototype device values; identical to what write_default_config emits.
Config default_config();

// Writes the default configuration file (and nothing else; the built-in slip
// curve applies unless the file is edited to point at a table).
void write_default_config(const std::filesystem::path& path);

// Resolves a config path against INVACC_CONFIG_PATH (colon-separated
// directories) when the path does not exist as given.
std::filesystem::path resolve_config_path(const std::filesystem::path& path);

// Profile files use the same key-value grammar with one "segment" line per
// command: duration, rate, P1, P2. Keys dt / noise_sd / seed are optional and
// override the passed-in defaults.
Profile load_profile(const std::filesystem::path& path, const SimDefaults& defaults = {});

}  // namespace invacc
