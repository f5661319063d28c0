#include "tris/channel.hpp"

#include <cmath>

#include "tris/error.hpp"
#include "tris/scenario.hpp"

namespace tris {

ComplexCoefficient ComplexCoefficient::from_polar(double amplitude, double phase) {
    if (amplitude < 0.0) {
        amplitude = -amplitude;
        phase += kPi;
    }
    return ComplexCoefficient{amplitude, wrap_phase(phase)};
}

void AntennaModel::validate() const {
    if (!(boresight_gain > 0.0 && std::isfinite(boresight_gain))) throw InvalidArgument("antenna boresight gain must be positive");
    if (!(pattern_exponent >= 0.0 && std::isfinite(pattern_exponent))) throw InvalidArgument("antenna pattern exponent must be >= 0");
}

double antenna_gain(const AntennaModel& model, double zenith) {
    if (zenith > kPi / 2.0) return 0.0;
    if (model.pattern_exponent == 0.0) return model.boresight_gain;
    const double c = std::max(std::cos(zenith), 0.0);
    return model.boresight_gain * std::pow(c, model.pattern_exponent);
}

double effective_area(const ElementAperture& aperture, double zenith) {
    return aperture.geometric_area * std::max(std::cos(zenith), 0.0);
}

namespace {

ComplexCoefficient segment_coefficient(const Scenario& scenario, const CartesianPoint& antenna_pos,
                                       const AntennaModel& antenna, ElementIndex element) {
    const CartesianPoint unit = element_position(scenario.layout, element);
    const double r = distance(antenna_pos, unit);
    if (r == 0.0) throw InvalidArgument("antenna coincides with a RIS unit");
    const double zenith = departure_zenith(antenna_pos, unit);
    const double amplitude = std::sqrt(antenna_gain(antenna, zenith) * effective_area(scenario.aperture(), zenith) / (4.0 * kPi)) / r;
    return ComplexCoefficient{amplitude, wrap_phase(-kTwoPi * r / scenario.wavelength())};
}

}  // namespace

ComplexCoefficient tx_channel_coefficient(const Scenario& scenario, ElementIndex element) {
    return segment_coefficient(scenario, scenario.tx_position(), scenario.tx_antenna, element);
}

ComplexCoefficient rx_channel_coefficient(const Scenario& scenario, ElementIndex element) {
    return segment_coefficient(scenario, scenario.rx_position(), scenario.rx_antenna, element);
}

}  // namespace tris
