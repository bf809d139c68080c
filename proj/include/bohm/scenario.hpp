#pragma once

// Named scenarios that regenerate the data behind each figure: field grids,
// trajectory tables and analysis reports, plus a manifest listing them.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bohm/dynamics.hpp"

namespace bohm {

inline constexpr const char* kToolVersion = "bohmflow 1.0.0";

const std::vector<std::string>& preset_names();

struct ScenarioConfig {
    std::string preset = "fig1";

    double x0 = 0.0;
    double p0 = 0.0;
    double sigma0 = 0.5;
    double mass = 1.0;
    double hbar = 1.0;
    double d = 10.0;
    bool exact_norm = false;

    Method method = Method::RK4;
    double dt = 1e-3;
    double dt_min = 1e-7;
    double tol = 1e-8;
    double t_end = 10.0;
    int record_stride = 10;
    int threads = 0;

    std::vector<double> snapshots{0.0, 2.0, 4.0, 10.0};
    std::size_t grid = 241;        ///< minimum samples per spatial axis
    std::size_t time_samples = 201; ///< samples of the time axis in space-time maps
    int markers = 21;              ///< markers per ensemble arm
    double half_width = 1.0;

    std::filesystem::path out;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Sets one field from its textual form; throws ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    /// key = value lines in fixed order; `out` and `threads` are excluded
    /// because they do not influence the artifacts.
    [[nodiscard]] std::string canonical() const;
    [[nodiscard]] std::uint64_t hash() const;
};

/// Applies "key = value" lines ('#' starts a comment) on top of `base`.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

/// Defaults for a preset: the physical parameters never change, the
/// square-array presets use a coarser step to stay within their time budget.
ScenarioConfig preset_defaults(const std::string& preset);

/// Layers preset defaults, then the optional config file, then `overrides`
/// (key to raw value). The preset is taken from the overrides, else the file,
/// else fig1.
ScenarioConfig resolve_config(const std::optional<std::filesystem::path>& file,
    const std::map<std::string, std::string>& overrides);

struct Artifact {
    std::string file; ///< relative to the output directory
    std::string kind; ///< grid, trajectories, table, config
    std::string axes; ///< axis metadata, empty when not applicable
};

struct RunManifest {
    std::string preset;
    std::uint64_t config_hash = 0;
    std::string tool_version = kToolVersion;
    std::vector<Artifact> artifacts;

    [[nodiscard]] std::string format() const;
};

/// Runs the configured preset into `config.out`; the manifest is written last.
RunManifest run_scenario(const ScenarioConfig& config);

} // namespace bohm
