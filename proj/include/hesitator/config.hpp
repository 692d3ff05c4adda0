#pragma once

#include <string>

#include "hesitator/experiments.hpp"

// Resolved run configuration: JSON config file plus flag overrides. The
// effective configuration is echoed next to every output for provenance.

namespace hesitator {

struct RunConfig {
    uint64_t seed = 42;
    int sessions = 5;             // simulate: sessions to run
    int experiment_sessions = 200;
    int workers = 1;
    int turn_limit = kDefaultTurnLimit;
    std::string out_dir = "out";
    std::string provider = "rule";  // "rule" | "external"
    std::string calibration_path;   // empty = built-in defaults

    // catalog provisioning: "environment" (quality-mixture model),
    // "synthetic" (uniform), or "file"
    std::string catalog_mode = "environment";
    std::string catalog_path;
    int synthetic_items = 256;
    int synthetic_attrs = 10;

    EnvironmentParams env;
    bool env_overridden = false;  // an explicit environment block wins over presets
    ProfileConfig profile;
    SalesAgentConfig sales;
    SelectionParams selection;
    HesitationParams hesitation;
    CalibrationTable calibration;
    SweepSpec sweep;
    std::vector<OverloadCondition> overload_conditions =
        OverloadCondition::standard_conditions();

    void validate() const;
    std::string to_json() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig default_run_config();

// Ablation defaults: a low-noise diagnostic attribute the expert profile
// emphasizes, plus a decoy attribute that degrades unweighted ratings.
void apply_ablation_environment(RunConfig& config);

} // namespace hesitator
