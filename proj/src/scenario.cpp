#include "tris/scenario.hpp"

#include <cmath>
#include <string>

#include "tris/error.hpp"

namespace tris {

std::vector<UnitState> Scenario::unit_states(const std::vector<std::size_t>& phase_indices) const {
    if (phase_indices.size() != layout.size()) {
        throw InvalidArgument("expected " + std::to_string(layout.size()) + " phase indices, got " + std::to_string(phase_indices.size()));
    }
    std::vector<UnitState> states;
    states.reserve(phase_indices.size());
    for (std::size_t idx : phase_indices) states.push_back(UnitState{idx, unit_current, attenuation});
    return states;
}

void Scenario::validate() const {
    if (!(frequency > 0.0 && std::isfinite(frequency))) throw InvalidArgument("carrier frequency must be positive");
    tx_pose.validate();
    rx_pose.validate();
    tx_antenna.validate();
    rx_antenna.validate();
    layout.validate();
    codebook.validate();
    if (!(tx_power >= 0.0 && std::isfinite(tx_power))) throw InvalidArgument("transmit power must be non-negative");
    if (!(noise_variance >= 0.0 && std::isfinite(noise_variance))) throw InvalidArgument("noise variance must be non-negative");
    if (!(attenuation >= 0.0 && attenuation <= 1.0)) throw InvalidArgument("unit attenuation must lie in [0, 1]");
    amplifier.gain_db(unit_current);
    if (jitter && !(jitter->max_error >= 0.0)) throw InvalidArgument("phase jitter bound must be non-negative");
    const double zt = tx_position().z;
    const double zr = rx_position().z;
    if (!(zt * zr < 0.0)) throw InvalidArgument("TX and RX must sit on opposite sides of the array plane");
}

Scenario default_chamber_scenario() {
    Scenario s;
    s.validate();
    return s;
}

}  // namespace tris
