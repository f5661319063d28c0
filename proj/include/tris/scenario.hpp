#pragma once

#include <optional>

#include "tris/channel.hpp"
#include "tris/geometry.hpp"
#include "tris/ris_model.hpp"

namespace tris {

/// Everything needed to evaluate one TX -> RIS -> RX link.
struct Scenario {
    double frequency = 2.6e9;  // Hz
    SphericalPose tx_pose{0.6, 0.0, 0.0};
    SphericalPose rx_pose = transmission_side_pose(4.0, 0.0);
    AntennaModel tx_antenna{10.0, 0.5};
    AntennaModel rx_antenna{10.0, 0.5};
    ArrayLayout layout{4, 8, 0.06, 0.06};
    PhaseCodebook codebook{};
    AmplifierModel amplifier = AmplifierModel::measured_default();
    double tx_power = 0.01;         // W
    double noise_variance = 1e-12;  // W
    double unit_current = kArrayCurrentHigh / 32.0;  // A, applied to every unit
    double attenuation = 1.0;
    std::optional<PhaseJitterModel> jitter;

    double wavelength() const { return kSpeedOfLight / frequency; }
    ElementAperture aperture() const { return ElementAperture{layout.unit_area()}; }
    CartesianPoint tx_position() const { return spherical_to_cartesian(tx_pose); }
    CartesianPoint rx_position() const { return spherical_to_cartesian(rx_pose); }

    /// Uniform unit states (scenario current and attenuation) for the given phase indices.
    std::vector<UnitState> unit_states(const std::vector<std::size_t>& phase_indices) const;

    /// Throws InvalidArgument on any violated invariant, including TX and RX on the
    /// same side of the array plane.
    void validate() const;
};

/// Anechoic-chamber setup: 4x8 array of 60 mm units at 2.6 GHz, TX 0.6 m in front on
/// boresight, RX 4 m behind on boresight, amplifiers at full (1.4 A array) supply.
Scenario default_chamber_scenario();

}  // namespace tris
