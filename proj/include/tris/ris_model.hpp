#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tris/channel.hpp"

namespace tris {

/// 2^bits equally spaced phases starting at `offset`.
struct PhaseCodebook {
    unsigned bits = 2;
    double offset = 0.0;

    std::size_t size() const noexcept { return std::size_t{1} << bits; }
    double step() const noexcept;
    double phase(std::size_t index) const;
    void validate() const;
};

std::vector<double> codebook_phases(const PhaseCodebook& codebook);

struct UnitState {
    std::size_t phase_index = 0;
    double amplifier_current = 0.0;  // amperes, per unit
    double attenuation = 1.0;        // mu in [0, 1]
};

/// Gain-versus-supply-current curve of one unit amplifier. Gains are in dB relative
/// to the passive (0 dB) reference and are linearly interpolated in dB between
/// calibration points, clamped outside them.
class AmplifierModel {
public:
    struct Point {
        double current;  // amperes
        double gain_db;
    };

    AmplifierModel(std::vector<Point> calibration, double max_current);

    /// Two points anchored on the measured 11.9 dB swing between 0.01 A and 1.4 A
    /// array supply, split evenly over `units` amplifiers; 120 mA per-unit budget.
    static AmplifierModel measured_default(std::size_t units = 32);

    const std::vector<Point>& calibration() const noexcept { return calibration_; }
    double max_current() const noexcept { return max_current_; }

    double gain_db(double current) const;
    double gain_linear(double current) const;

private:
    std::vector<Point> calibration_;
    double max_current_;
};

inline constexpr double kDefaultMaxUnitCurrent = 0.120;
inline constexpr double kArrayCurrentLow = 0.01;
inline constexpr double kArrayCurrentHigh = 1.4;
inline constexpr double kMeasuredGainSwingDb = 11.9;

double amplifier_gain(const AmplifierModel& amp, double current);

struct PhaseJitterModel {
    double max_error = deg_to_rad(8.0);
    std::uint64_t seed = 0;
};

/// Deterministic uniform phase error source in [-max_error, +max_error].
class JitterSampler {
public:
    explicit JitterSampler(const PhaseJitterModel& model);
    double sample();
    double max_error() const noexcept { return max_error_; }

private:
    double max_error_;
    std::mt19937_64 rng_;
};

/// Gamma_n = mu * sqrt(G_u) * exp(j phi_n); phase from the codebook plus an optional jitter draw.
ComplexCoefficient unit_transmission_coefficient(const UnitState& state, const PhaseCodebook& codebook,
                                                 const AmplifierModel& amp, JitterSampler* jitter = nullptr);

/// Per-unit RCS sigma = mu * sqrt(G_u * A(theta_in) * A(theta_out)).
double unit_rcs(const UnitState& state, const AmplifierModel& amp, double incidence_zenith, double departure_zenith,
                const ElementAperture& aperture);

/// SP4T bias bits (Vcc1, Vcc2, Vcc3).
struct ControlWord {
    bool vcc1 = false;
    bool vcc2 = false;
    bool vcc3 = false;

    friend bool operator==(const ControlWord&, const ControlWord&) = default;

    /// "011" style, Vcc1 first.
    std::string to_string() const;
    static ControlWord parse(std::string_view bits);
};

/// 2-bit codebook index (0: 0 deg .. 3: 270 deg) to switch bias word.
ControlWord encode_control(std::size_t phase_index);
std::size_t decode_control(const ControlWord& word);

}  // namespace tris
