#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tris/experiments.hpp"

namespace tris {

// Run configuration files are line-oriented:
//
//   # comment
//   [scenario]            scenario keys, see ScenarioParams
//   key = value
//   [amplifier]
//   max_current_a = 0.12
//   point = <per-unit current A> <gain dB>     (repeatable, increasing current)
//   [sweep <name>]        one CSV per sweep; any scenario key may be overridden here
//   variable = rx_distance | rx_zenith | amplifier_current | pattern_angle
//   start = ...  stop = ...  step = ...          (meters or degrees)
//   currents = 0.01, 0.2, 1.4                     (amplifier_current, array-level A)
//   beamforming = none | continuous | quantized | blind | greedy
//
// Angles are in degrees and distances in meters at this boundary only. rx_zenith_deg
// is measured from the array normal on the RX (transmission) side.

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct ConfigSection {
    std::string kind;  // "scenario", "amplifier" or "sweep"
    std::string name;  // sweep name, empty otherwise
    std::size_t line = 0;
    std::vector<ConfigEntry> entries;
};

struct ConfigDocument {
    std::string source;
    std::vector<ConfigSection> sections;
};

/// Syntax-level parse; throws ConfigError with the offending line.
ConfigDocument parse_config_document(std::string_view text, std::string source);

/// Scenario description in boundary units, as written in config files.
struct ScenarioParams {
    double frequency_ghz = 2.6;
    std::size_t rows = 4;
    std::size_t cols = 8;
    double pitch_x_mm = 60.0;
    double pitch_y_mm = 60.0;
    double tx_distance_m = 0.6;
    double tx_zenith_deg = 0.0;
    double tx_azimuth_deg = 0.0;
    double rx_distance_m = 4.0;
    double rx_zenith_deg = 0.0;
    double rx_azimuth_deg = 0.0;
    double tx_gain_dbi = 10.0;
    double rx_gain_dbi = 10.0;
    double tx_pattern_exponent = 0.5;
    double rx_pattern_exponent = 0.5;
    double tx_power_dbm = 10.0;
    double noise_power_dbm = -90.0;
    unsigned phase_bits = 2;
    double phase_offset_deg = 0.0;
    std::optional<double> unit_current_a;  // default: full measured supply, 1.4 A / 32
    double attenuation = 1.0;
    double jitter_deg = 0.0;  // 0 disables jitter
    std::uint64_t seed = 0;

    std::optional<double> max_current_a;
    std::vector<AmplifierModel::Point> calibration;  // empty: measured default

    /// Source line of each explicitly set key, for diagnostics.
    std::map<std::string, std::size_t> lines;

    /// Sets one scenario key; returns false when the key is not a scenario key.
    bool set(const std::string& key, const std::string& value, std::size_t line, const std::string& source);

    /// Converts to model units and validates field by field.
    Scenario build(const std::string& source) const;
};

bool is_scenario_key(std::string_view key);

struct SweepDefinition {
    std::string name;
    std::size_t line = 0;
    ScenarioParams params;
    Scenario scenario;
    SweepSpec spec;
    std::optional<double> reference;  // grid value that deltas are taken against
};

struct RunConfig {
    std::string source;
    std::uint64_t seed = 0;
    ScenarioParams params;
    Scenario scenario;
    std::vector<SweepDefinition> sweeps;
};

RunConfig parse_run_config(std::string_view text, std::string source, std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig load_run_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Applies "key=value" overrides (CLI --set) on top of the params.
void apply_overrides(ScenarioParams& params, const std::vector<std::string>& assignments);

}  // namespace tris
