#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tris/beamforming.hpp"

namespace tris {

enum class SweepVariable { RxDistance, RxZenith, AmplifierCurrent, PatternAngle };
enum class BeamformingMethod { None, Continuous, Quantized, Blind, Greedy };

std::string_view to_string(SweepVariable v);
std::string_view to_string(BeamformingMethod m);
SweepVariable parse_sweep_variable(std::string_view s);
BeamformingMethod parse_beamforming_method(std::string_view s);

struct BeamformingOptions {
    BeamformingMethod method = BeamformingMethod::Quantized;
    std::size_t passes = 4;       // blind search
    std::size_t max_rounds = 50;  // greedy search
    double phase_constant = 0.0;  // C of the continuous optimum
    std::uint64_t seed = 0;       // feedback noise
};

/// Phases chosen for the array; held fixed while the geometry or supply changes.
struct AppliedBeamforming {
    BeamformingMethod method = BeamformingMethod::None;
    std::optional<PhaseConfiguration> configuration;  // codebook methods only
    std::vector<double> phases;                       // per unit, radians
    std::size_t feedback_queries = 0;
    std::string digest;
};

/// Configures the array for the link's current RX position.
AppliedBeamforming apply_beamforming(const LinkBudget& link, const BeamformingOptions& options);

/// Received power of `link` with frozen phases and the scenario's unit states.
double frozen_received_power(const LinkBudget& link, const AppliedBeamforming& beam);

/// 16-hex-digit FNV-1a digest.
std::string digest_hex(std::string_view bytes);
std::string configuration_digest(const PhaseConfiguration& config);
std::string phases_digest(std::span<const double> phases);

/// start, start + step, ... up to stop (inclusive, 1e-9 relative slack).
std::vector<double> sweep_grid(double start, double stop, double step);

/// RX pose with the template's side and azimuth but a new distance and zenith; the
/// zenith is measured from the array normal on the RX side and a negative value
/// mirrors the point through boresight.
SphericalPose rx_pose_at(const SphericalPose& rx_template, double r, double local_zenith);
double rx_local_zenith(const SphericalPose& rx_pose);

struct SweepSpec {
    SweepVariable variable = SweepVariable::RxDistance;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    BeamformingOptions beamforming{};
    std::vector<double> currents;  // amplifier_current sweeps, array-level A
    double steering_deg = 0.0;     // pattern_angle sweeps
};

struct SweepRow {
    double value = 0.0;  // meters, degrees or amperes
    double received_power_dbm = 0.0;
    double path_loss_db = 0.0;
    std::string config_digest;
};

struct SweepResult {
    SweepVariable variable = SweepVariable::RxDistance;
    std::vector<SweepRow> rows;
};

struct PatternMetrics {
    double peak_angle_deg = 0.0;
    double peak_power_dbm = 0.0;
    double hpbw_deg = 0.0;             // NaN when a -3 dB crossing is missing
    double peak_to_sidelobe_db = 0.0;  // NaN without sidelobes in the grid
};

struct PatternResult {
    double steering_deg = 0.0;
    std::vector<double> angles_deg;
    std::vector<double> received_power_dbm;
    std::vector<double> path_loss_db;
    std::vector<double> relative_db;  // peak at 0 dB
    std::string config_digest;
    PatternMetrics metrics;
};

/// Peak, -3 dB width (linear interpolation of both crossings) and peak-to-sidelobe ratio
/// of a normalized cut sampled on an increasing angle grid.
PatternMetrics pattern_metrics(std::span<const double> angles_deg, std::span<const double> relative_db);

/// Path loss versus RX distance (m); beamforming re-run at every point.
SweepResult distance_sweep(const Scenario& base, const SweepSpec& spec);
/// Path loss versus RX zenith (deg, from the RX-side normal); beamforming re-run at every point.
SweepResult angle_sweep(const Scenario& base, const SweepSpec& spec);
/// Received power versus array supply current (A, split evenly over the units) with the
/// beam fixed once at the scenario's own unit current.
SweepResult gain_sweep(const Scenario& base, std::span<const double> array_currents, const BeamformingOptions& options);
/// Beam steered toward `steering_deg`, frozen, then observed over `observation_deg`
/// at the scenario's RX distance.
PatternResult radiation_pattern(const Scenario& base, double steering_deg, std::span<const double> observation_deg,
                                const BeamformingOptions& options);

/// Dispatches on spec.variable.
SweepResult run_sweep(const Scenario& base, const SweepSpec& spec);

}  // namespace tris
