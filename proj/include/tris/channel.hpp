#pragma once

#include <complex>

#include "tris/geometry.hpp"

namespace tris {

struct Scenario;

inline constexpr double kSpeedOfLight = 299792458.0;

/// amplitude * exp(j * phase), phase kept in [0, 2pi).
struct ComplexCoefficient {
    double amplitude = 0.0;
    double phase = 0.0;

    static ComplexCoefficient from_polar(double amplitude, double phase);
    std::complex<double> value() const { return std::polar(amplitude, phase); }
};

/// Horn-like pattern G(theta) = boresight_gain * cos^q(theta), zero behind the antenna.
/// The antenna looks along the array normal, so theta is the zenith of the element
/// direction as returned by departure_zenith.
struct AntennaModel {
    double boresight_gain = 1.0;  // linear
    double pattern_exponent = 0.0;

    void validate() const;
};

struct ElementAperture {
    double geometric_area = 0.0036;  // m^2
};

double antenna_gain(const AntennaModel& model, double zenith);

/// Projected aperture area * cos(zenith).
double effective_area(const ElementAperture& aperture, double zenith);

/// Free-space TX -> unit coefficient sqrt(G_t A_t / 4pi) * exp(-j 2pi r / lambda) / r.
ComplexCoefficient tx_channel_coefficient(const Scenario& scenario, ElementIndex element);

/// Same expression for the unit -> RX segment.
ComplexCoefficient rx_channel_coefficient(const Scenario& scenario, ElementIndex element);

}  // namespace tris
