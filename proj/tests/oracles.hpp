#pragma once

// Test-only reference computations. Nothing here calls into the link budget or
// beamforming code; each routine re-derives its value from the raw scenario data.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "tris/scenario.hpp"

namespace tris::oracle {

inline constexpr double pi = std::numbers::pi;

struct Vec3 {
    double x, y, z;
};

inline Vec3 pose_point(const SphericalPose& p) {
    return {p.r * std::sin(p.theta) * std::cos(p.phi), p.r * std::sin(p.theta) * std::sin(p.phi), p.r * std::cos(p.theta)};
}

/// Unit centers in row-major order.
inline std::vector<Vec3> unit_centers(const ArrayLayout& l) {
    std::vector<Vec3> out;
    for (std::size_t row = 1; row <= l.n_rows; ++row) {
        for (std::size_t col = 1; col <= l.n_cols; ++col) {
            const double dy = double(col) - (double(l.n_cols) + 1) / 2;
            const double dx = (double(l.n_rows) + 1) / 2 - double(row);
            out.push_back({dy * l.pitch_x, dx * l.pitch_y, 0.0});
        }
    }
    return out;
}

inline double norm3(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Interpolated amplifier gain in linear power units, written out independently.
inline double unit_gain_linear(const Scenario& s, double current) {
    const auto& cal = s.amplifier.calibration();
    double db = cal.front().gain_db;
    if (current >= cal.back().current) {
        db = cal.back().gain_db;
    } else if (current > cal.front().current) {
        for (std::size_t i = 1; i < cal.size(); ++i) {
            if (current <= cal[i].current) {
                const double t = (current - cal[i - 1].current) / (cal[i].current - cal[i - 1].current);
                db = cal[i - 1].gain_db + t * (cal[i].gain_db - cal[i - 1].gain_db);
                break;
            }
        }
    }
    return std::pow(10.0, db / 10.0);
}

/// Per-unit summands of the expanded received-signal expression (without sqrt(P_t)/4pi),
/// for explicit unit phases, currents and attenuations.
inline std::vector<std::complex<double>> expanded_terms(const Scenario& s, const std::vector<double>& phases,
                                                        const std::vector<double>& currents, const std::vector<double>& mus) {
    const Vec3 tx = pose_point(s.tx_pose);
    const Vec3 rx = pose_point(s.rx_pose);
    const double lambda = 299792458.0 / s.frequency;
    const double area = s.layout.pitch_x * s.layout.pitch_y;
    const auto units = unit_centers(s.layout);
    std::vector<std::complex<double>> out;
    for (std::size_t n = 0; n < units.size(); ++n) {
        const double rt = norm3(tx, units[n]);
        const double rr = norm3(rx, units[n]);
        const double ct = std::abs(tx.z) / rt;
        const double cr = std::abs(rx.z) / rr;
        const double gt = s.tx_antenna.boresight_gain * std::pow(ct, s.tx_antenna.pattern_exponent);
        const double gr = s.rx_antenna.boresight_gain * std::pow(cr, s.rx_antenna.pattern_exponent);
        const double gu = unit_gain_linear(s, currents[n]);
        const double mag = std::sqrt(gt * gr * gu * (area * ct) * (area * cr)) / (rt * rr) * mus[n];
        out.push_back(std::polar(mag, phases[n] - 2.0 * pi * (rt + rr) / lambda));
    }
    return out;
}

inline double power_from_terms(double tx_power, const std::vector<std::complex<double>>& terms) {
    std::complex<double> sum{};
    for (const auto& t : terms) sum += t;
    return tx_power / (16.0 * pi * pi) * std::norm(sum);
}

/// Expanded-form received power with the scenario's uniform unit current and attenuation.
inline double expanded_power(const Scenario& s, const std::vector<double>& phases) {
    const std::size_t n = s.layout.size();
    return power_from_terms(s.tx_power, expanded_terms(s, phases, std::vector<double>(n, s.unit_current), std::vector<double>(n, s.attenuation)));
}

/// Exhaustive search over codebook index vectors, by plain enumeration.
inline double exhaustive_best_power(const Scenario& s) {
    const std::size_t n = s.layout.size();
    const std::size_t levels = std::size_t{1} << s.codebook.bits;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= levels;
    double best = 0.0;
    std::vector<double> phases(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = n; i-- > 0;) {
            phases[i] = s.codebook.offset + double(c % levels) * 2.0 * pi / double(levels);
            c /= levels;
        }
        best = std::max(best, expanded_power(s, phases));
    }
    return best;
}

/// Uniform-line array factor -3 dB beamwidth for N elements at pitch d (radians),
/// found by bisection on |sin(N x)/(N sin x)|^2 = 1/2 with x = pi d sin(theta) / lambda.
inline double array_factor_hpbw(std::size_t n, double pitch, double lambda) {
    auto af2 = [&](double theta) {
        const double x = pi * pitch * std::sin(theta) / lambda;
        if (std::abs(x) < 1e-15) return 1.0;
        const double v = std::sin(double(n) * x) / (double(n) * std::sin(x));
        return v * v;
    };
    double lo = 0.0, hi = pi / 2;
    // first null bounds the main lobe
    hi = std::min(hi, std::asin(std::min(1.0, lambda / (double(n) * pitch))));
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (af2(mid) > 0.5 ? lo : hi) = mid;
    }
    return 2.0 * lo;
}

/// Randomized but valid scenario with at most max_units elements.
inline Scenario random_scenario(std::mt19937_64& rng, std::size_t max_units) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * u(rng); };
    Scenario s;
    std::size_t rows = 0, cols = 0;
    do {
        rows = 1 + std::size_t(u(rng) * double(max_units));
        cols = 1 + std::size_t(u(rng) * double(max_units));
    } while (rows * cols > max_units);
    s.layout = ArrayLayout{rows, cols, uni(0.02, 0.09), uni(0.02, 0.09)};
    s.frequency = uni(1e9, 8e9);
    s.tx_pose = SphericalPose{uni(0.3, 6.0), uni(0.0, 1.2), uni(0.0, 2 * pi * 0.999)};
    s.rx_pose = transmission_side_pose(uni(0.3, 6.0), uni(0.0, 1.2), uni(0.0, 2 * pi * 0.999));
    s.tx_antenna = AntennaModel{uni(0.5, 40.0), uni(0.0, 3.0)};
    s.rx_antenna = AntennaModel{uni(0.5, 40.0), uni(0.0, 3.0)};
    const double g1 = uni(0.0, 10.0);
    const double g2 = g1 + uni(0.0, 10.0);
    s.amplifier = AmplifierModel({{0.001, 0.0}, {0.02, g1}, {0.08, g2}}, 0.12);
    s.unit_current = uni(0.0, 0.12);
    s.attenuation = uni(0.1, 1.0);
    s.tx_power = uni(1e-3, 1.0);
    s.codebook = PhaseCodebook{2, uni(0.0, pi / 2 * 0.999)};
    return s;
}

}  // namespace tris::oracle
